#pragma once

// Ground truth by enumeration: try every one of the m! manipulator ballots.

#include <cstdint>
#include <optional>
#include <vector>

#include "stvmanip/election.hpp"
#include "stvmanip/solver.hpp"

namespace stvm {

struct OracleBudget {
  int max_m = 8;
  std::uint64_t max_enumerations = 3'628'800;  // 10!
};

inline constexpr int kOracleHardMaxM = 10;

struct OracleResult {
  bool manipulable = false;
  std::optional<Ballot> witness;  ///< first success in lexicographic ballot order
  std::uint64_t enumerations = 0;
};

/// Throws BudgetExceeded when m is over the budget, InvalidInput on a malformed query.
OracleResult brute_force_manipulable(const ManipulationQuery& query, TieBreak tie,
                                     const OracleBudget& budget = {});

std::vector<Candidate> possible_winners_brute(const Profile& profile, Weight weight, TieBreak tie,
                                              const OracleBudget& budget = {});

}  // namespace stvm
