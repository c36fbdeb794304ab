#include "stvmanip/oracle.hpp"

#include <algorithm>

#include "stvmanip/errors.hpp"

namespace stvm {

namespace {

std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

void check_budget(int m, const OracleBudget& budget) {
  if (budget.max_m > kOracleHardMaxM)
    throw InvalidInput("oracle budget max_m may not exceed " + std::to_string(kOracleHardMaxM));
  if (m > budget.max_m)
    throw BudgetExceeded("oracle refuses m=" + std::to_string(m) + " (budget max_m=" +
                         std::to_string(budget.max_m) + ")");
  if (factorial(m) > budget.max_enumerations)
    throw BudgetExceeded("oracle refuses m=" + std::to_string(m) + ": " + std::to_string(m) +
                         "! ballots exceeds max_enumerations=" + std::to_string(budget.max_enumerations));
}

bool elects(const std::vector<Candidate>& winners, Candidate c) {
  return std::find(winners.begin(), winners.end(), c) != winners.end();
}

// Calls visit(winners, ballot) for every manipulator ballot in lexicographic
// order until it returns false.
template <class Visit>
std::uint64_t enumerate(const Profile& profile, Weight weight, TieBreak tie, Visit&& visit) {
  const int m = profile.m();
  Profile with = profile;
  with.add(identity_ballot(m), weight);
  std::vector<WeightedBallot> ballots = with.ballots();
  Ballot perm = identity_ballot(m);
  std::uint64_t count = 0;
  do {
    ballots.back().ballot = perm;
    const Profile trial(m, ballots);
    ++count;
    if (!visit(stv_winners(trial, tie), perm)) break;
  } while (std::next_permutation(perm.ranking.begin(), perm.ranking.end()));
  return count;
}

}  // namespace

OracleResult brute_force_manipulable(const ManipulationQuery& query, TieBreak tie,
                                     const OracleBudget& budget) {
  const int m = query.profile.m();
  if (query.chosen.id < 1 || query.chosen.id > m) throw InvalidInput("chosen candidate out of range");
  if (query.weight < 1) throw InvalidInput("manipulator weight must be >= 1");
  check_budget(m, budget);

  OracleResult out;
  out.enumerations = enumerate(query.profile, query.weight, tie,
                               [&](const std::vector<Candidate>& winners, const Ballot& b) {
                                 if (!elects(winners, query.chosen)) return true;
                                 out.manipulable = true;
                                 out.witness = b;
                                 return false;
                               });
  return out;
}

std::vector<Candidate> possible_winners_brute(const Profile& profile, Weight weight, TieBreak tie,
                                              const OracleBudget& budget) {
  if (weight < 1) throw InvalidInput("manipulator weight must be >= 1");
  check_budget(profile.m(), budget);
  std::vector<Candidate> out;
  for (int j = 1; j <= profile.m(); ++j) {
    const ManipulationQuery q{profile, Candidate{j}, weight};
    if (brute_force_manipulable(q, tie, budget).manipulable) out.push_back(Candidate{j});
  }
  return out;
}

}  // namespace stvm
