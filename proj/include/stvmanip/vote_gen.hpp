#pragma once

// Random profile generators: impartial culture, Polya-Eggenberger urn,
// single-peaked urn, and resampling of a recorded election.
//
// Each generator comes in two flavours: one drawing from a caller-owned Rng
// (so the experiment harness can keep drawing from the same stream), and one
// taking an RngSeed that fully determines the output.

#include <vector>

#include "stvmanip/election.hpp"
#include "stvmanip/rng.hpp"

namespace stvm {

/// Uniform random permutation of 1..m.
Ballot random_ballot(int m, Rng& rng);

Profile gen_ic(int m, int n, Rng& rng);
Profile gen_ic(int m, int n, RngSeed seed);

/// Urn with a = b * m! extra copies per draw, simulated without building the
/// urn: draw t (0-based) repeats a uniformly chosen earlier draw with
/// probability t*b / (1 + t*b), otherwise it is a fresh uniform ballot.
/// b = 0 consumes exactly the same random stream as gen_ic.
Profile gen_urn(int m, int n, double b, Rng& rng);
Profile gen_urn(int m, int n, double b, RngSeed seed);

/// Pick a peak on `axis` uniformly, then grow the ranking outwards one
/// candidate at a time, taking the left or right neighbour by a fair coin
/// until one side runs out.
Ballot random_single_peaked(const std::vector<Candidate>& axis, Rng& rng);

/// Every prefix of the ranking occupies a contiguous stretch of `axis`.
bool is_single_peaked(const Ballot& ballot, const std::vector<Candidate>& axis);

/// Same copy-or-fresh urn as gen_urn, with fresh ballots single-peaked on
/// `axis` (a permutation of 1..m). An empty axis means 1, 2, ..., m.
Profile gen_single_peaked_urn(int m, int n, double b, const std::vector<Candidate>& axis, Rng& rng);
Profile gen_single_peaked_urn(int m, int n, double b, const std::vector<Candidate>& axis,
                              RngSeed seed);

/// Resamples a recorded election to target_m candidates and target_n agents.
///
/// Agents: a random subset when target_n <= n, else draws with replacement.
/// Candidates: one shared random subset (relative order kept, relabelled
/// 1..target_m in original-id order) when target_m <= m; otherwise each
/// original candidate is cloned round-robin into a block of adjacent ids and
/// every agent orders each block by an independent uniform shuffle.
/// Weighted source ballots count as that many agents.
Profile sample_dataset(const Profile& dataset, int target_m, int target_n, Rng& rng);
Profile sample_dataset(const Profile& dataset, int target_m, int target_n, RngSeed seed);

}  // namespace stvm
