#include "stvmanip/election.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "stvmanip/errors.hpp"

namespace stvm {

const char* to_string(TieBreak t) {
  return t == TieBreak::lexicographic ? "lexicographic" : "optimistic";
}

TieBreak parse_tie_break(const std::string& s) {
  if (s == "lexicographic" || s == "lex") return TieBreak::lexicographic;
  if (s == "optimistic" || s == "opt") return TieBreak::optimistic;
  throw InvalidInput("unknown tie-break '" + s + "'");
}

bool is_total_order(const Ballot& b, int m) {
  if (m < 1 || b.ranking.size() != static_cast<std::size_t>(m)) return false;
  std::vector<char> seen(static_cast<std::size_t>(m) + 1, 0);
  for (Candidate c : b.ranking) {
    if (c.id < 1 || c.id > m || seen[c.id]) return false;
    seen[c.id] = 1;
  }
  return true;
}

Ballot identity_ballot(int m) {
  Ballot b;
  b.ranking.reserve(static_cast<std::size_t>(std::max(m, 0)));
  for (int i = 1; i <= m; ++i) b.ranking.push_back(Candidate{i});
  return b;
}

std::string format_ballot(const Ballot& b, char sep) {
  std::string out;
  for (std::size_t i = 0; i < b.ranking.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(b.ranking[i].id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Profile

Profile::Profile(int m) : m_(m) {
  if (m < 1) throw InvalidInput("profile needs at least one candidate");
}

Profile::Profile(int m, std::vector<WeightedBallot> ballots) : Profile(m) {
  ballots_.reserve(ballots.size());
  for (auto& wb : ballots) add(std::move(wb.ballot), wb.weight);
}

void Profile::add(Ballot ballot, Weight weight) {
  if (weight < 1) throw InvalidInput("ballot weight must be >= 1");
  if (!is_total_order(ballot, m_))
    throw InvalidInput("ballot is not a permutation of 1.." + std::to_string(m_));
  ballots_.push_back(WeightedBallot{std::move(ballot), weight});
  total_weight_ += weight;
}

// ---------------------------------------------------------------------------
// ElectionState

ElectionState::ElectionState(const Profile& profile)
    : profile_(&profile),
      m_(profile.m()),
      remaining_count_(profile.m()),
      total_weight_(profile.total_weight()) {
  if (m_ < 1) throw InvalidInput("election has no candidates");
  const auto slots = static_cast<std::size_t>(m_) + 1;
  alive_.assign(slots, 1);
  alive_[0] = 0;
  scores_.assign(slots, 0);
  head_.assign(slots, -1);
  const auto& ballots = profile.ballots();
  top_pos_.assign(ballots.size(), 0);
  next_.assign(ballots.size(), -1);
  for (std::size_t i = 0; i < ballots.size(); ++i) {
    const int top = ballots[i].ballot.ranking.front().id;
    scores_[top] += ballots[i].weight;
    next_[i] = head_[top];
    head_[top] = static_cast<std::int32_t>(i);
  }
}

bool ElectionState::is_remaining(Candidate c) const {
  return c.id >= 1 && c.id <= m_ && alive_[c.id];
}

Weight ElectionState::score(Candidate c) const {
  if (!is_remaining(c)) throw ContractViolation("score of a candidate that is not remaining");
  return scores_[c.id];
}

std::vector<Candidate> ElectionState::remaining() const {
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(remaining_count_));
  for (int j = 1; j <= m_; ++j)
    if (alive_[j]) out.push_back(Candidate{j});
  return out;
}

Candidate ElectionState::top_of(std::size_t index) const {
  return profile_->ballots().at(index).ballot.ranking[top_pos_.at(index)];
}

void ElectionState::eliminate(Candidate d) {
  if (!is_remaining(d)) throw ContractViolation("eliminating a candidate that is not remaining");
  if (remaining_count_ < 2) throw ContractViolation("cannot eliminate the last candidate");
  alive_[d.id] = 0;
  --remaining_count_;
  scores_[d.id] = 0;
  const auto& ballots = profile_->ballots();
  std::int32_t i = head_[d.id];
  head_[d.id] = -1;
  while (i >= 0) {
    const std::int32_t following = next_[i];
    const auto& ranking = ballots[i].ballot.ranking;
    std::uint32_t pos = top_pos_[i];
    while (!alive_[ranking[pos].id]) ++pos;
    top_pos_[i] = pos;
    const int to = ranking[pos].id;
    scores_[to] += ballots[i].weight;
    next_[i] = head_[to];
    head_[to] = i;
    i = following;
  }
}

std::string ElectionState::remaining_key() const {
  std::string key((static_cast<std::size_t>(m_) + 7) / 8, '\0');
  for (int j = 1; j <= m_; ++j)
    if (alive_[j]) key[(j - 1) / 8] = static_cast<char>(key[(j - 1) / 8] | (1 << ((j - 1) % 8)));
  return key;
}

// ---------------------------------------------------------------------------
// Tally

ElectionState initial_state(const Profile& profile) { return ElectionState(profile); }

ElectionState transfer(ElectionState state, Candidate d) {
  state.eliminate(d);
  return state;
}

std::vector<Candidate> min_effective_candidates(const ElectionState& state, Candidate bonus_to,
                                                Weight bonus) {
  std::vector<Candidate> out;
  Weight best = std::numeric_limits<Weight>::max();
  for (int j = 1; j <= state.m(); ++j) {
    const Candidate c{j};
    if (!state.is_remaining(c)) continue;
    Weight s = state.score(c);
    if (c == bonus_to) s += bonus;
    if (s < best) {
      best = s;
      out.clear();
    }
    if (s == best) out.push_back(c);
  }
  return out;
}

std::vector<Candidate> min_score_candidates(const ElectionState& state) {
  return min_effective_candidates(state, Candidate{0}, 0);
}

Candidate stv_winner(const Profile& profile) {
  ElectionState state(profile);
  while (state.remaining_count() > 1) state.eliminate(min_score_candidates(state).front());
  return state.remaining().front();
}

namespace {

class OptimisticTally {
 public:
  explicit OptimisticTally(int m) : winners_(static_cast<std::size_t>(m) + 1, 0) {}

  void run(const ElectionState& state) {
    if (state.remaining_count() == 1) {
      winners_[state.remaining().front().id] = 1;
      return;
    }
    if (!visited_.emplace(state.remaining_key(), true).second) return;
    const auto minima = min_score_candidates(state);
    if (state.total_weight() == 0) {
      // Every count is a perpetual tie; any candidate can be left standing.
      for (Candidate c : minima) winners_[c.id] = 1;
      return;
    }
    if (minima.size() > 1 && state.score(minima.front()) == 0) {
      // Zero-score candidates fall one after another in any order, and
      // eliminating them moves no ballots, so the order cannot matter.
      ElectionState next = state;
      for (Candidate c : minima) next.eliminate(c);
      run(next);
      return;
    }
    for (Candidate c : minima) run(transfer(state, c));
  }

  std::vector<Candidate> winners() const {
    std::vector<Candidate> out;
    for (std::size_t j = 1; j < winners_.size(); ++j)
      if (winners_[j]) out.push_back(Candidate{static_cast<int>(j)});
    return out;
  }

 private:
  std::vector<char> winners_;
  std::unordered_map<std::string, bool> visited_;
};

}  // namespace

std::vector<Candidate> stv_winners_optimistic(const Profile& profile) {
  ElectionState state(profile);
  OptimisticTally tally(profile.m());
  tally.run(state);
  return tally.winners();
}

std::vector<Candidate> stv_winners(const Profile& profile, TieBreak tie) {
  if (tie == TieBreak::lexicographic) return {stv_winner(profile)};
  return stv_winners_optimistic(profile);
}

}  // namespace stvm
