#pragma once

// Experiment grids over random elections.
//
// A trial is a pure function of (model, m, n, w, solver config, point seed,
// trial index): it generates a profile, draws the chosen candidate uniformly
// from 1..m, and solves. run_point farms trials out over OpenMP threads;
// run_point_serial is the single-threaded reference the tests compare it to.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stvmanip/dataset_io.hpp"
#include "stvmanip/election.hpp"
#include "stvmanip/oracle.hpp"
#include "stvmanip/rng.hpp"
#include "stvmanip/solver.hpp"

namespace stvm {

enum class VoteModel { ic, urn, single_peaked_urn, dataset };

const char* to_string(VoteModel v);
VoteModel parse_vote_model(const std::string& s);

struct ModelParams {
  VoteModel model = VoteModel::ic;
  double b = 0.0;                          ///< urn correlation b = a / m!
  std::vector<Candidate> axis;             ///< single-peaked spectrum; empty = 1..m
  std::shared_ptr<const Profile> dataset;  ///< source election for VoteModel::dataset
};

Profile generate_profile(const ModelParams& params, int m, int n, Rng& rng);

enum class Algorithm { improved, csl, oracle };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

struct SolverConfig {
  Algorithm algorithm = Algorithm::improved;
  SolverOptions options;
  OracleBudget budget;
};

struct TrialRecord {
  bool manipulable = false;
  std::uint64_t nodes = 0;
  double time_ms = 0.0;
};

struct PointSpec {
  ModelParams model;
  int m = 1;
  int n = 0;
  Weight w = 1;
  SolverConfig solver;
  int trials = 1000;
  std::uint64_t seed = 0;  ///< point seed; trial i uses derive_seed(seed, i)
  bool timing = false;     ///< record wall-clock time per trial
  int jobs = 1;            ///< OpenMP threads for run_point
};

struct StatSummary {
  int trials = 0;
  int successes = 0;
  double p_manip = 0.0;
  double mean_nodes = 0.0;
  double median_nodes = 0.0;
  double p90_nodes = 0.0;
  double mean_time_ms = 0.0;  ///< NaN unless timing was on
};

TrialRecord run_trial(const PointSpec& spec, std::uint64_t trial_index);

/// Aggregates in trial order. Percentiles interpolate linearly between order statistics.
StatSummary summarize(std::span<const TrialRecord> records, bool timing);

StatSummary run_point(const PointSpec& spec);
StatSummary run_point_serial(const PointSpec& spec);

/// vary_mn moves m and n together (m = n).
enum class SweepAxis { vary_n, vary_m, vary_mn, vary_coalition };

const char* to_string(SweepAxis a);
SweepAxis parse_sweep_axis(const std::string& s);

struct SweepSpec {
  ModelParams model;
  SweepAxis axis = SweepAxis::vary_n;
  int m = 4;
  int n = 16;
  Weight w = 1;
  std::vector<int> points;  ///< empty: powers of two 1..128, or coalition_axis(n)
  int trials = 1000;
  std::vector<Algorithm> algorithms{Algorithm::improved};
  SolverOptions options;
  OracleBudget budget;
  std::uint64_t seed = 1;
  bool timing = false;
  int jobs = 1;
};

std::vector<int> powers_of_two(int lo, int hi);

/// Coalition sizes k with k / sqrt(n) in {1/4, 1/2, 1, 2, 4}, rounded,
/// clamped to [1, n] and deduplicated.
std::vector<int> coalition_axis(int n);

/// The sweep's point list with defaults filled in. Throws InvalidInput if it is
/// empty or not strictly increasing.
std::vector<int> resolve_points(const SweepSpec& spec);

/// Point `index` is seeded with derive_seed(spec.seed, index); every algorithm
/// at a point sees the same elections. Rows come out in point order, one per
/// algorithm. `on_row` (if set) is called as each row is finished.
std::vector<ResultRow> run_sweep(const SweepSpec& spec,
                                 const std::function<void(const ResultRow&)>& on_row = {});

/// "key = value" lines; '#' comments. Keys: model, b, axis_order, dataset,
/// axis, m, n, w, points, trials, algorithm, tie_break, branch_order, seed,
/// timing, jobs, oracle_max_m. `dataset` paths resolve relative to `base_dir`.
SweepSpec parse_sweep_spec(std::string_view text, const std::string& base_dir = ".");

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
};

/// Least squares on log(y) = log a + m log b. R^2 is taken on the log scale and
/// is 1 when the log values have no variance. Needs >= 3 points, all y > 0,
/// and at least two distinct m.
FitResult fit_exponential(std::span<const std::pair<double, double>> points);

// ---------------------------------------------------------------------------
// Oracle cross-check

using Decider = std::function<SolveOutcome(const ManipulationQuery&, const SolverOptions&)>;

struct CheckConfig {
  int m_min = 2;
  int m_max = 5;
  int n_min = 1;
  int n_max = 8;
  std::vector<Weight> weights{1, 2};
  std::vector<ModelParams> models;  ///< empty: IC and urn with b = 1
  std::vector<TieBreak> tie_breaks{TieBreak::lexicographic, TieBreak::optimistic};
  int trials = 200;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct CheckReport {
  std::uint64_t instances = 0;
  std::uint64_t agreements = 0;
  std::uint64_t disagreements = 0;
  /// First disagreement in enumeration order, as a replayable description.
  std::optional<std::string> counterexample;
};

/// Compares `decider` (default: manipulate_improved) with the brute-force
/// oracle and with CSL winner-set membership on every configuration.
CheckReport run_check(const CheckConfig& config, const Decider& decider = {});

}  // namespace stvm
