#pragma once

// Single-manipulator (or coalition-in-unison) STV manipulation search.
//
// Two searches share one branching rule:
//   manipulate_improved  prunes branches that eliminate the chosen candidate,
//                        stops at the first success and can try the
//                        "manipulator props up d" branch first;
//   csl_possible_winners explores the whole tree and returns every candidate
//                        the manipulator can elect.
// Because the branching rule is shared, the improved search always visits a
// subtree of the exhaustive one under the same branch order and tie-break.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stvmanip/election.hpp"

namespace stvm {

enum class BranchOrder {
  left_first,   ///< "manipulator does not save d" before "manipulator votes for d"
  right_first,  ///< the reverse; default
};

const char* to_string(BranchOrder b);
BranchOrder parse_branch_order(const std::string& s);

struct SolverOptions {
  TieBreak tie_break = TieBreak::lexicographic;
  BranchOrder branch_order = BranchOrder::right_first;
};

/// Non-manipulator votes, the candidate the manipulator wants elected, and the
/// manipulator's weight (1 for a single agent, k for a coalition voting alike).
struct ManipulationQuery {
  const Profile& profile;
  Candidate chosen;
  Weight weight = 1;
};

struct SolveStats {
  std::uint64_t nodes = 0;  ///< invocations of the recursive procedure, root included
  std::chrono::nanoseconds elapsed{0};
  BranchOrder branch_order = BranchOrder::right_first;

  double elapsed_ms() const { return std::chrono::duration<double, std::milli>(elapsed).count(); }
};

struct SolveOutcome {
  bool manipulable = false;
  std::optional<Ballot> witness;
  SolveStats stats;
};

struct PossibleWinners {
  std::vector<Candidate> winners;
  SolveStats stats;
};

/// Throws InvalidInput for a chosen candidate outside 1..m or weight < 1.
SolveOutcome manipulate_improved(const ManipulationQuery& query, const SolverOptions& opts = {});

PossibleWinners csl_possible_winners(const Profile& profile, Weight weight,
                                     const SolverOptions& opts = {});

/// Lays out a manipulator ballot: the candidates the search fixed as the
/// manipulator's top, in the order they were fixed, then `chosen` (unless it
/// was itself the last fix), then everything else ascending.
/// Throws ContractViolation on duplicates or out-of-range ids.
Ballot reconstruct_witness(std::span<const Candidate> fix_sequence, Candidate chosen, int m);

/// True when appending `witness` with `weight` to `profile` can elect `chosen`
/// (lexicographic: is the winner; optimistic: is among the possible winners).
bool witness_elects(const Profile& profile, const Ballot& witness, Weight weight, Candidate chosen,
                    TieBreak tie);

}  // namespace stvm
