#pragma once

// Ballots, profiles and the single-winner STV tally.
//
// Candidates are 1-based throughout (1..m). Per-candidate arrays are sized m+1
// and slot 0 is unused.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stvm {

struct Candidate {
  int id = 0;

  friend constexpr auto operator<=>(Candidate, Candidate) = default;
};

using Weight = std::int64_t;

/// A strict total order over 1..m, most preferred first.
struct Ballot {
  std::vector<Candidate> ranking;

  friend bool operator==(const Ballot&, const Ballot&) = default;
};

struct WeightedBallot {
  Ballot ballot;
  Weight weight = 1;

  friend bool operator==(const WeightedBallot&, const WeightedBallot&) = default;
};

enum class TieBreak {
  lexicographic,  ///< eliminate the smallest-index candidate among tied minima
  optimistic,     ///< explore every tied minimum (ties favour the manipulator)
};

const char* to_string(TieBreak t);
TieBreak parse_tie_break(const std::string& s);

/// Returns true when `b` is a permutation of 1..m.
bool is_total_order(const Ballot& b, int m);

Ballot identity_ballot(int m);
std::string format_ballot(const Ballot& b, char sep = ' ');

/// A multiset of weighted ballots over m candidates.
class Profile {
 public:
  Profile() = default;
  /// Throws InvalidInput when m < 1.
  explicit Profile(int m);
  Profile(int m, std::vector<WeightedBallot> ballots);

  int m() const noexcept { return m_; }
  const std::vector<WeightedBallot>& ballots() const noexcept { return ballots_; }
  std::size_t size() const noexcept { return ballots_.size(); }
  bool empty() const noexcept { return ballots_.empty(); }

  /// Sum of ballot weights (the agent count n for unit-weight profiles).
  Weight total_weight() const noexcept { return total_weight_; }

  /// Validates and appends. Throws InvalidInput on a non-permutation or weight < 1.
  void add(Ballot ballot, Weight weight = 1);

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  int m_ = 0;
  std::vector<WeightedBallot> ballots_;
  Weight total_weight_ = 0;
};

/// Remaining candidates plus first-preference scores during an STV count.
///
/// Holds a non-owning pointer to the profile it was built from; the profile must
/// outlive every state derived from it. Each ballot caches the position of its
/// highest-ranked remaining candidate, and ballots sitting on the same candidate
/// are threaded into an intrusive list so an elimination only touches the
/// ballots that actually move.
class ElectionState {
 public:
  explicit ElectionState(const Profile& profile);

  int m() const noexcept { return m_; }
  int remaining_count() const noexcept { return remaining_count_; }
  bool is_remaining(Candidate c) const;
  Weight score(Candidate c) const;
  Weight total_weight() const noexcept { return total_weight_; }

  /// Remaining candidates in ascending order.
  std::vector<Candidate> remaining() const;

  /// Highest-ranked remaining candidate on ballot `index`.
  Candidate top_of(std::size_t index) const;

  /// Removes `d` and moves its ballots to their next remaining preference.
  /// Throws ContractViolation if `d` is not remaining or is the last candidate.
  void eliminate(Candidate d);

  /// Remaining candidates as a bitmask string, usable as a memo key.
  std::string remaining_key() const;

  const Profile& profile() const noexcept { return *profile_; }

 private:
  const Profile* profile_;
  int m_;
  int remaining_count_;
  Weight total_weight_;
  std::vector<char> alive_;
  std::vector<Weight> scores_;
  std::vector<std::uint32_t> top_pos_;  // per ballot, index into its ranking
  std::vector<std::int32_t> head_;      // per candidate, first ballot on it or -1
  std::vector<std::int32_t> next_;      // per ballot, next ballot on the same candidate
};

/// Fresh count with every candidate remaining. Throws InvalidInput when m = 0.
ElectionState initial_state(const Profile& profile);

/// Copy of `state` with `d` eliminated.
ElectionState transfer(ElectionState state, Candidate d);

/// All remaining candidates attaining the minimum score, ascending.
std::vector<Candidate> min_score_candidates(const ElectionState& state);

/// Same, with `bonus` added to `bonus_to` (a manipulator's vote held outside the state).
std::vector<Candidate> min_effective_candidates(const ElectionState& state, Candidate bonus_to,
                                                Weight bonus);

/// Runs the count down to a single survivor, always eliminating the smallest-index minimum.
Candidate stv_winner(const Profile& profile);

/// Every candidate that survives under some resolution of elimination ties.
std::vector<Candidate> stv_winners_optimistic(const Profile& profile);

/// Dispatches on `tie`; lexicographic mode yields a single-element set.
std::vector<Candidate> stv_winners(const Profile& profile, TieBreak tie);

}  // namespace stvm
