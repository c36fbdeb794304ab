#include "stvmanip/solver.hpp"

#include <algorithm>
#include <unordered_set>

#include "stvmanip/errors.hpp"

namespace stvm {

const char* to_string(BranchOrder b) {
  return b == BranchOrder::left_first ? "left_first" : "right_first";
}

BranchOrder parse_branch_order(const std::string& s) {
  if (s == "left_first" || s == "left") return BranchOrder::left_first;
  if (s == "right_first" || s == "right") return BranchOrder::right_first;
  throw InvalidInput("unknown branch order '" + s + "'");
}

namespace {

constexpr Candidate kFree{0};

// One child of a search frame: who goes out, and whose name sits at the top of
// the manipulator's ballot afterwards (kFree when unconstrained).
struct Branch {
  std::vector<Candidate> eliminated;
  Candidate fixed_top;
  bool fixes_new_top = false;
};

// Children of a frame, in exploration order. Both searches use this, so they
// always agree on the shape of the tree.
std::vector<Branch> expand(const ElectionState& state, Candidate fixed_top, Weight weight,
                           const SolverOptions& opts) {
  std::vector<Branch> out;
  const bool optimistic = opts.tie_break == TieBreak::optimistic;

  if (fixed_top != kFree) {
    // The manipulator's vote is on fixed_top; the elimination is forced.
    const auto minima = min_effective_candidates(state, fixed_top, weight);
    const auto next_top = [&](Candidate d) { return d == fixed_top ? kFree : fixed_top; };
    const Weight low = state.score(minima.front()) + (minima.front() == fixed_top ? weight : 0);
    if (!optimistic) {
      out.push_back({{minima.front()}, next_top(minima.front())});
    } else if (minima.size() > 1 && low == 0) {
      // fixed_top carries the weight, so it is never among zero-score minima.
      out.push_back({minima, fixed_top});
    } else {
      for (Candidate d : minima) out.push_back({{d}, next_top(d)});
    }
    return out;
  }

  const auto minima = min_score_candidates(state);
  std::vector<Branch> left;
  std::vector<Branch> right;

  if (!optimistic) {
    // d goes out unless the manipulator votes for d, in which case e does.
    const Candidate d = minima.front();
    const Candidate e = min_effective_candidates(state, d, weight).front();
    left.push_back({{d}, kFree});
    if (e != d) right.push_back({{e}, d, true});
  } else if (minima.size() > 1 && state.score(minima.front()) == 0) {
    // All but at most one zero-score candidate fall, in any order; which one
    // is left standing is the only real choice.
    for (Candidate keep : minima) {
      Branch b{{}, kFree};
      for (Candidate c : minima)
        if (c != keep) b.eliminated.push_back(c);
      left.push_back(std::move(b));
    }
  } else {
    for (Candidate d : minima) left.push_back({{d}, kFree});
    // Voting for one of several tied minima only leaves another tied minimum
    // to fall, which the free branches already cover.
    if (minima.size() == 1) {
      const Candidate d = minima.front();
      for (Candidate e : min_effective_candidates(state, d, weight))
        if (e != d) right.push_back({{e}, d, true});
    }
  }

  auto& first = opts.branch_order == BranchOrder::right_first ? right : left;
  auto& second = opts.branch_order == BranchOrder::right_first ? left : right;
  out.reserve(first.size() + second.size());
  std::move(first.begin(), first.end(), std::back_inserter(out));
  std::move(second.begin(), second.end(), std::back_inserter(out));
  return out;
}

ElectionState apply(const ElectionState& state, const Branch& b) {
  ElectionState next = state;
  for (Candidate c : b.eliminated) next.eliminate(c);
  return next;
}

bool eliminates(const Branch& b, Candidate c) {
  return std::find(b.eliminated.begin(), b.eliminated.end(), c) != b.eliminated.end();
}

// Optimistic tie-breaking lets many elimination orders reach the same
// (remaining set, fixed top) frame. The frame's outcome depends on nothing
// else, so both searches remember frames they have finished. The lexicographic
// tree is searched without this so its node counts stay those of the plain
// recursion.
class FrameMemo {
 public:
  explicit FrameMemo(bool enabled) : enabled_(enabled) {}

  /// True the first time a frame is offered.
  bool insert(const ElectionState& state, Candidate fixed_top) {
    if (!enabled_) return true;
    return seen_.insert(key(state, fixed_top)).second;
  }

  bool contains(const ElectionState& state, Candidate fixed_top) const {
    return enabled_ && seen_.count(key(state, fixed_top)) > 0;
  }

 private:
  static std::string key(const ElectionState& state, Candidate fixed_top) {
    std::string k = state.remaining_key();
    k.append(reinterpret_cast<const char*>(&fixed_top.id), sizeof fixed_top.id);
    return k;
  }

  bool enabled_;
  std::unordered_set<std::string> seen_;
};

class ImprovedSearch {
 public:
  ImprovedSearch(Candidate chosen, Weight weight, const SolverOptions& opts)
      : chosen_(chosen), weight_(weight), opts_(opts), failed_(opts.tie_break == TieBreak::optimistic) {}

  bool visit(const ElectionState& state, Candidate fixed_top) {
    ++nodes_;
    if (state.remaining_count() == 1) return state.is_remaining(chosen_);
    if (failed_.contains(state, fixed_top)) return false;
    for (const Branch& b : expand(state, fixed_top, weight_, opts_)) {
      if (eliminates(b, chosen_)) continue;
      if (b.fixes_new_top) fixes_.push_back(b.fixed_top);
      if (visit(apply(state, b), b.fixed_top)) return true;
      if (b.fixes_new_top) fixes_.pop_back();
    }
    failed_.insert(state, fixed_top);
    return false;
  }

  std::uint64_t nodes() const { return nodes_; }
  const std::vector<Candidate>& fixes() const { return fixes_; }

 private:
  Candidate chosen_;
  Weight weight_;
  const SolverOptions& opts_;
  std::uint64_t nodes_ = 0;
  std::vector<Candidate> fixes_;
  FrameMemo failed_;
};

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(int m, Weight weight, const SolverOptions& opts)
      : weight_(weight),
        opts_(opts),
        winners_(static_cast<std::size_t>(m) + 1, 0),
        done_(opts.tie_break == TieBreak::optimistic) {}

  void visit(const ElectionState& state, Candidate fixed_top) {
    ++nodes_;
    if (state.remaining_count() == 1) {
      winners_[state.remaining().front().id] = 1;
      return;
    }
    if (!done_.insert(state, fixed_top)) return;
    for (const Branch& b : expand(state, fixed_top, weight_, opts_)) visit(apply(state, b), b.fixed_top);
  }

  std::uint64_t nodes() const { return nodes_; }
  std::vector<Candidate> winners() const {
    std::vector<Candidate> out;
    for (std::size_t j = 1; j < winners_.size(); ++j)
      if (winners_[j]) out.push_back(Candidate{static_cast<int>(j)});
    return out;
  }

 private:
  Weight weight_;
  const SolverOptions& opts_;
  std::uint64_t nodes_ = 0;
  std::vector<char> winners_;
  FrameMemo done_;
};

using Clock = std::chrono::steady_clock;

}  // namespace

SolveOutcome manipulate_improved(const ManipulationQuery& query, const SolverOptions& opts) {
  const int m = query.profile.m();
  if (query.chosen.id < 1 || query.chosen.id > m)
    throw InvalidInput("chosen candidate " + std::to_string(query.chosen.id) + " outside 1.." +
                       std::to_string(m));
  if (query.weight < 1) throw InvalidInput("manipulator weight must be >= 1");

  const auto start = Clock::now();
  ImprovedSearch search(query.chosen, query.weight, opts);
  const bool ok = search.visit(ElectionState(query.profile), kFree);

  SolveOutcome out;
  out.manipulable = ok;
  if (ok) out.witness = reconstruct_witness(search.fixes(), query.chosen, m);
  out.stats.nodes = search.nodes();
  out.stats.elapsed = Clock::now() - start;
  out.stats.branch_order = opts.branch_order;
  return out;
}

PossibleWinners csl_possible_winners(const Profile& profile, Weight weight, const SolverOptions& opts) {
  if (weight < 1) throw InvalidInput("manipulator weight must be >= 1");
  const auto start = Clock::now();
  ExhaustiveSearch search(profile.m(), weight, opts);
  search.visit(ElectionState(profile), kFree);

  PossibleWinners out;
  out.winners = search.winners();
  out.stats.nodes = search.nodes();
  out.stats.elapsed = Clock::now() - start;
  out.stats.branch_order = opts.branch_order;
  return out;
}

Ballot reconstruct_witness(std::span<const Candidate> fix_sequence, Candidate chosen, int m) {
  if (chosen.id < 1 || chosen.id > m) throw ContractViolation("chosen candidate out of range");
  std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
  Ballot b;
  b.ranking.reserve(static_cast<std::size_t>(m));
  for (Candidate c : fix_sequence) {
    if (c.id < 1 || c.id > m) throw ContractViolation("fixed top out of range");
    if (used[c.id]) throw ContractViolation("fixed top appears twice");
    used[c.id] = 1;
    b.ranking.push_back(c);
  }
  if (!used[chosen.id]) {
    used[chosen.id] = 1;
    b.ranking.push_back(chosen);
  } else if (b.ranking.back() != chosen) {
    throw ContractViolation("chosen candidate fixed before a later fix");
  }
  for (int j = 1; j <= m; ++j)
    if (!used[j]) b.ranking.push_back(Candidate{j});
  return b;
}

bool witness_elects(const Profile& profile, const Ballot& witness, Weight weight, Candidate chosen,
                    TieBreak tie) {
  Profile with = profile;
  with.add(witness, weight);
  const auto winners = stv_winners(with, tie);
  return std::find(winners.begin(), winners.end(), chosen) != winners.end();
}

}  // namespace stvm
