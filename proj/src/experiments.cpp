#include "stvmanip/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>

#include <omp.h>

#include "stvmanip/errors.hpp"
#include "stvmanip/vote_gen.hpp"

namespace stvm {

const char* to_string(VoteModel v) {
  switch (v) {
    case VoteModel::ic:
      return "ic";
    case VoteModel::urn:
      return "urn";
    case VoteModel::single_peaked_urn:
      return "sp_urn";
    case VoteModel::dataset:
      return "dataset";
  }
  return "?";
}

VoteModel parse_vote_model(const std::string& s) {
  if (s == "ic") return VoteModel::ic;
  if (s == "urn") return VoteModel::urn;
  if (s == "sp_urn" || s == "single_peaked_urn" || s == "sp") return VoteModel::single_peaked_urn;
  if (s == "dataset") return VoteModel::dataset;
  throw InvalidInput("unknown vote model '" + s + "'");
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::improved:
      return "improved";
    case Algorithm::csl:
      return "csl";
    case Algorithm::oracle:
      return "oracle";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "improved") return Algorithm::improved;
  if (s == "csl") return Algorithm::csl;
  if (s == "oracle") return Algorithm::oracle;
  throw InvalidInput("unknown algorithm '" + s + "'");
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::vary_n:
      return "vary_n";
    case SweepAxis::vary_m:
      return "vary_m";
    case SweepAxis::vary_mn:
      return "vary_mn";
    case SweepAxis::vary_coalition:
      return "vary_coalition";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "vary_n") return SweepAxis::vary_n;
  if (s == "vary_m") return SweepAxis::vary_m;
  if (s == "vary_mn") return SweepAxis::vary_mn;
  if (s == "vary_coalition") return SweepAxis::vary_coalition;
  throw InvalidInput("unknown sweep axis '" + s + "'");
}

Profile generate_profile(const ModelParams& params, int m, int n, Rng& rng) {
  switch (params.model) {
    case VoteModel::ic:
      return gen_ic(m, n, rng);
    case VoteModel::urn:
      return gen_urn(m, n, params.b, rng);
    case VoteModel::single_peaked_urn:
      return gen_single_peaked_urn(m, n, params.b, params.axis, rng);
    case VoteModel::dataset:
      if (!params.dataset) throw InvalidInput("dataset model without a dataset");
      if (n == 0) return Profile(m);
      return sample_dataset(*params.dataset, m, n, rng);
  }
  throw InvalidInput("unknown vote model");
}

// ---------------------------------------------------------------------------
// Trials

TrialRecord run_trial(const PointSpec& spec, std::uint64_t trial_index) {
  Rng rng(derive_seed(spec.seed, trial_index));
  const Profile profile = generate_profile(spec.model, spec.m, spec.n, rng);
  const Candidate chosen{1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.m)))};
  const ManipulationQuery query{profile, chosen, spec.w};

  using Clock = std::chrono::steady_clock;
  const auto start = spec.timing ? Clock::now() : Clock::time_point{};
  TrialRecord rec;
  switch (spec.solver.algorithm) {
    case Algorithm::improved: {
      const auto out = manipulate_improved(query, spec.solver.options);
      rec.manipulable = out.manipulable;
      rec.nodes = out.stats.nodes;
      break;
    }
    case Algorithm::csl: {
      const auto out = csl_possible_winners(profile, spec.w, spec.solver.options);
      rec.manipulable = std::find(out.winners.begin(), out.winners.end(), chosen) != out.winners.end();
      rec.nodes = out.stats.nodes;
      break;
    }
    case Algorithm::oracle: {
      const auto out = brute_force_manipulable(query, spec.solver.options.tie_break, spec.solver.budget);
      rec.manipulable = out.manipulable;
      rec.nodes = out.enumerations;
      break;
    }
  }
  if (spec.timing) rec.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return rec;
}

namespace {

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

void check_point(const PointSpec& spec) {
  if (spec.m < 1) throw InvalidInput("m must be >= 1");
  if (spec.n < 0) throw InvalidInput("n must be >= 0");
  if (spec.w < 1) throw InvalidInput("w must be >= 1");
  if (spec.trials < 1) throw InvalidInput("trials must be >= 1");
}

}  // namespace

StatSummary summarize(std::span<const TrialRecord> records, bool timing) {
  StatSummary s;
  s.trials = static_cast<int>(records.size());
  if (records.empty()) return s;
  std::vector<double> nodes;
  nodes.reserve(records.size());
  double node_sum = 0.0;
  double time_sum = 0.0;
  for (const auto& r : records) {
    s.successes += r.manipulable ? 1 : 0;
    nodes.push_back(static_cast<double>(r.nodes));
    node_sum += static_cast<double>(r.nodes);
    time_sum += r.time_ms;
  }
  const double count = static_cast<double>(records.size());
  s.p_manip = s.successes / count;
  s.mean_nodes = node_sum / count;
  std::sort(nodes.begin(), nodes.end());
  s.median_nodes = quantile(nodes, 0.5);
  s.p90_nodes = quantile(nodes, 0.9);
  s.mean_time_ms = timing ? time_sum / count : std::numeric_limits<double>::quiet_NaN();
  return s;
}

StatSummary run_point_serial(const PointSpec& spec) {
  check_point(spec);
  std::vector<TrialRecord> records;
  records.reserve(static_cast<std::size_t>(spec.trials));
  for (int i = 0; i < spec.trials; ++i) records.push_back(run_trial(spec, static_cast<std::uint64_t>(i)));
  return summarize(records, spec.timing);
}

StatSummary run_point(const PointSpec& spec) {
  check_point(spec);
  std::vector<TrialRecord> records(static_cast<std::size_t>(spec.trials));
  std::exception_ptr failure;
  const int jobs = std::max(1, spec.jobs);
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
  for (int i = 0; i < spec.trials; ++i) {
    try {
      records[static_cast<std::size_t>(i)] = run_trial(spec, static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(stvm_point_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(records, spec.timing);
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<int> powers_of_two(int lo, int hi) {
  std::vector<int> out;
  for (long long v = 1; v <= hi; v *= 2)
    if (v >= lo) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<int> coalition_axis(int n) {
  if (n < 1) throw InvalidInput("coalition axis needs n >= 1");
  const double root = std::sqrt(static_cast<double>(n));
  std::vector<int> out;
  for (double ratio : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const int k = std::clamp(static_cast<int>(std::lround(ratio * root)), 1, n);
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  return out;
}

std::vector<int> resolve_points(const SweepSpec& spec) {
  std::vector<int> pts = spec.points;
  if (pts.empty())
    pts = spec.axis == SweepAxis::vary_coalition ? coalition_axis(spec.n) : powers_of_two(1, 128);
  if (pts.empty()) throw InvalidInput("sweep has no points");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i] <= pts[i - 1]) throw InvalidInput("sweep points must be strictly increasing");
  return pts;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const std::function<void(const ResultRow&)>& on_row) {
  if (spec.algorithms.empty()) throw InvalidInput("sweep needs at least one algorithm");
  const auto pts = resolve_points(spec);
  std::vector<ResultRow> rows;
  for (std::size_t idx = 0; idx < pts.size(); ++idx) {
    PointSpec point;
    point.model = spec.model;
    point.m = spec.m;
    point.n = spec.n;
    point.w = spec.w;
    switch (spec.axis) {
      case SweepAxis::vary_n:
        point.n = pts[idx];
        break;
      case SweepAxis::vary_m:
        point.m = pts[idx];
        break;
      case SweepAxis::vary_mn:
        point.m = pts[idx];
        point.n = pts[idx];
        break;
      case SweepAxis::vary_coalition:
        point.w = pts[idx];
        break;
    }
    point.trials = spec.trials;
    point.seed = derive_seed(spec.seed, idx);
    point.timing = spec.timing;
    point.jobs = spec.jobs;
    for (Algorithm alg : spec.algorithms) {
      point.solver = SolverConfig{alg, spec.options, spec.budget};
      StatSummary s;
      try {
        s = run_point(point);
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep point " + std::to_string(idx) + " (m=" + std::to_string(point.m) +
                                 " n=" + std::to_string(point.n) + " w=" + std::to_string(point.w) +
                                 ", " + to_string(alg) + ") failed: " + e.what());
      }
      ResultRow row;
      row.model = std::string(to_string(spec.model.model)) + "/" + to_string(alg);
      row.m = point.m;
      row.n = point.n;
      row.w = point.w;
      row.b = spec.model.model == VoteModel::urn || spec.model.model == VoteModel::single_peaked_urn
                  ? spec.model.b
                  : 0.0;
      row.trials = s.trials;
      row.tie_break = to_string(spec.options.tie_break);
      row.branch_order = to_string(spec.options.branch_order);
      row.p_manip = s.p_manip;
      row.mean_nodes = s.mean_nodes;
      row.median_nodes = s.median_nodes;
      row.p90_nodes = s.p90_nodes;
      row.mean_time_ms = s.mean_time_ms;
      row.seed = spec.seed;
      if (on_row) on_row(row);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string trimmed(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::string spaced = s;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  while (in >> item) out.push_back(item);
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<Int>(x);
  } catch (const std::exception&) {
    throw ParseError(ParseErrorKind::malformed_line, line, key + " expects an integer");
  }
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text, const std::string& base_dir) {
  SweepSpec spec;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trimmed(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(ParseErrorKind::malformed_line, lineno, "expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string val = trimmed(line.substr(eq + 1));
    try {
      if (key == "model") {
        spec.model.model = parse_vote_model(val);
      } else if (key == "b") {
        std::size_t used = 0;
        spec.model.b = std::stod(val, &used);
        if (used != val.size()) throw InvalidInput("b expects a number");
      } else if (key == "axis_order") {
        spec.model.axis.clear();
        for (const auto& id : split_list(val)) spec.model.axis.push_back(Candidate{to_int<int>(key, id, lineno)});
      } else if (key == "dataset") {
        std::filesystem::path p(val);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        spec.model.dataset = std::make_shared<const Profile>(read_profile_file(p));
      } else if (key == "axis") {
        spec.axis = parse_sweep_axis(val);
      } else if (key == "m") {
        spec.m = to_int<int>(key, val, lineno);
      } else if (key == "n") {
        spec.n = to_int<int>(key, val, lineno);
      } else if (key == "w") {
        spec.w = to_int<Weight>(key, val, lineno);
      } else if (key == "points") {
        spec.points.clear();
        for (const auto& p : split_list(val)) spec.points.push_back(to_int<int>(key, p, lineno));
      } else if (key == "trials") {
        spec.trials = to_int<int>(key, val, lineno);
      } else if (key == "algorithm") {
        spec.algorithms.clear();
        if (val == "both")
          spec.algorithms = {Algorithm::improved, Algorithm::csl};
        else
          for (const auto& a : split_list(val)) spec.algorithms.push_back(parse_algorithm(a));
      } else if (key == "tie_break") {
        spec.options.tie_break = parse_tie_break(val);
      } else if (key == "branch_order") {
        spec.options.branch_order = parse_branch_order(val);
      } else if (key == "seed") {
        spec.seed = to_int<std::uint64_t>(key, val, lineno);
      } else if (key == "timing") {
        spec.timing = val == "true" || val == "1" || val == "on";
      } else if (key == "jobs") {
        spec.jobs = to_int<int>(key, val, lineno);
      } else if (key == "oracle_max_m") {
        spec.budget.max_m = to_int<int>(key, val, lineno);
      } else {
        throw ParseError(ParseErrorKind::malformed_line, lineno, "unknown key '" + key + "'");
      }
    } catch (const InvalidInput& e) {
      throw ParseError(ParseErrorKind::malformed_line, lineno, e.what());
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Fit

FitResult fit_exponential(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw InvalidInput("exponential fit needs at least 3 points");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    if (!(y > 0.0)) throw InvalidInput("exponential fit needs positive values");
    sx += x;
    sy += std::log(y);
  }
  const double count = static_cast<double>(points.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    const double dx = x - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InvalidInput("exponential fit needs at least two distinct m");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (intercept + slope * x);
    ss_res += r * r;
  }
  FitResult fit;
  fit.a = std::exp(intercept);
  fit.b = std::exp(slope);
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

// ---------------------------------------------------------------------------
// Cross-check

namespace {

struct CheckCase {
  int m;
  int n;
  Weight w;
  std::size_t model;
  TieBreak tie;
};

std::string describe(const CheckCase& c, const ModelParams& model, Candidate chosen, bool oracle,
                     bool solver, bool csl, bool witness_ok, const Profile& profile) {
  std::ostringstream s;
  s << "# disagreement: model=" << to_string(model.model) << " b=" << model.b << " m=" << c.m
    << " n=" << c.n << " w=" << c.w << " tie_break=" << to_string(c.tie) << " chosen=" << chosen.id
    << " oracle=" << oracle << " solver=" << solver << " csl=" << csl << " witness_ok=" << witness_ok
    << '\n'
    << write_profile(profile);
  return s.str();
}

}  // namespace

CheckReport run_check(const CheckConfig& config, const Decider& decider) {
  std::vector<ModelParams> models = config.models;
  if (models.empty()) {
    models.push_back(ModelParams{VoteModel::ic, 0.0, {}, nullptr});
    models.push_back(ModelParams{VoteModel::urn, 1.0, {}, nullptr});
  }
  const Decider solve = decider ? decider : Decider([](const ManipulationQuery& q, const SolverOptions& o) {
    return manipulate_improved(q, o);
  });

  std::vector<CheckCase> cases;
  for (int m = config.m_min; m <= config.m_max; ++m)
    for (int n = config.n_min; n <= config.n_max; ++n)
      for (Weight w : config.weights)
        for (std::size_t mi = 0; mi < models.size(); ++mi)
          for (TieBreak tie : config.tie_breaks) cases.push_back({m, n, w, mi, tie});

  const std::size_t per_case = static_cast<std::size_t>(std::max(config.trials, 0));
  const std::size_t total = cases.size() * per_case;
  std::vector<char> agree(total, 1);
  std::vector<std::string> notes(total);
  std::exception_ptr failure;
  const int jobs = std::max(1, config.jobs);

#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs)
  for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(total); ++flat) {
    try {
      const auto ci = static_cast<std::size_t>(flat) / per_case;
      const auto& c = cases[ci];
      Rng rng(derive_seed(derive_seed(config.seed, ci), static_cast<std::uint64_t>(flat) % per_case));
      const Profile profile = generate_profile(models[c.model], c.m, c.n, rng);
      const Candidate chosen{1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(c.m)))};
      const ManipulationQuery q{profile, chosen, c.w};
      const SolverOptions opts{c.tie, BranchOrder::right_first};
      OracleBudget budget;
      budget.max_m = kOracleHardMaxM;

      const bool oracle = brute_force_manipulable(q, c.tie, budget).manipulable;
      const auto out = solve(q, opts);
      const auto csl = csl_possible_winners(profile, c.w, opts);
      const bool in_csl = std::find(csl.winners.begin(), csl.winners.end(), chosen) != csl.winners.end();
      const bool witness_ok =
          !out.manipulable || (out.witness && witness_elects(profile, *out.witness, c.w, chosen, c.tie));
      if (oracle != out.manipulable || in_csl != oracle || !witness_ok) {
        agree[static_cast<std::size_t>(flat)] = 0;
        notes[static_cast<std::size_t>(flat)] =
            describe(c, models[c.model], chosen, oracle, out.manipulable, in_csl, witness_ok, profile);
      }
    } catch (...) {
#pragma omp critical(stvm_check_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  CheckReport report;
  report.instances = total;
  for (std::size_t i = 0; i < total; ++i) {
    if (agree[i]) {
      ++report.agreements;
    } else {
      ++report.disagreements;
      if (!report.counterexample) report.counterexample = notes[i];
    }
  }
  return report;
}

}  // namespace stvm
