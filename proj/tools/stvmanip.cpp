// stvmanip: generate elections, decide STV manipulability, run sweeps, fit scaling.
//
// Exit codes: 0 ok, 1 I/O error or check disagreement, 2 bad flags,
// 3 profile parse error, 4 oracle budget exceeded.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stvmanip/dataset_io.hpp"
#include "stvmanip/errors.hpp"
#include "stvmanip/experiments.hpp"
#include "stvmanip/oracle.hpp"
#include "stvmanip/solver.hpp"
#include "stvmanip/vote_gen.hpp"

namespace {

using namespace stvm;

enum Exit : int { kOk = 0, kIo = 1, kUsage = 2, kParse = 3, kBudget = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Candidate> parse_id_list(const std::string& s) {
  std::vector<Candidate> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(Candidate{std::stoi(item)});
    } catch (const std::exception&) {
      throw UsageError("bad candidate id '" + item + "'");
    }
  }
  return out;
}

std::string join_ids(const std::vector<Candidate>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i].id);
  return s;
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string model = "ic";
  int m = 0;
  int n = 0;
  double b = 0.0;
  std::string axis;
  std::string dataset;
  std::uint64_t seed = 1;
  std::string out;
  CLI::Option* b_opt = nullptr;
  CLI::Option* dataset_opt = nullptr;
};

int cmd_gen(const GenArgs& a) {
  ModelParams params;
  try {
    params.model = parse_vote_model(a.model);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("--model: ") + e.what());
  }
  const bool urnish = params.model == VoteModel::urn || params.model == VoteModel::single_peaked_urn;
  if (urnish && a.b_opt->count() == 0) throw UsageError("--b is required for --model " + a.model);
  if (params.model == VoteModel::dataset && a.dataset_opt->count() == 0)
    throw UsageError("--dataset is required for --model dataset");
  if (a.m < 1) throw UsageError("--m must be >= 1");
  if (a.n < 0) throw UsageError("--n must be >= 0");
  params.b = a.b;
  if (!a.axis.empty()) params.axis = parse_id_list(a.axis);
  if (params.model == VoteModel::dataset)
    params.dataset = std::make_shared<const Profile>(read_profile_file(a.dataset));

  Rng rng(RngSeed{a.seed, 0});
  Profile p;
  try {
    p = generate_profile(params, a.m, a.n, rng);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  if (a.out.empty()) {
    std::cout << write_profile(p);
  } else {
    write_profile_file(p, a.out);
    std::cout << a.out << ": model=" << to_string(params.model) << " m=" << p.m()
              << " n=" << p.total_weight() << " seed=" << a.seed << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string profile;
  int chosen = 1;
  Weight weight = 1;
  std::string algorithm = "improved";
  std::string tie_break = "lexicographic";
  std::string branch_order = "right_first";
  int oracle_max_m = OracleBudget{}.max_m;
};

int cmd_solve(const SolveArgs& a) {
  SolverOptions opts;
  Algorithm alg;
  try {
    opts.tie_break = parse_tie_break(a.tie_break);
    opts.branch_order = parse_branch_order(a.branch_order);
    alg = parse_algorithm(a.algorithm);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const Profile profile = read_profile_file(a.profile);
  if (a.chosen < 1 || a.chosen > profile.m())
    throw UsageError("--chosen must be in 1.." + std::to_string(profile.m()));
  if (a.weight < 1) throw UsageError("--weight must be >= 1");
  const Candidate chosen{a.chosen};
  const ManipulationQuery q{profile, chosen, a.weight};

  std::ostringstream line;
  switch (alg) {
    case Algorithm::improved: {
      const auto out = manipulate_improved(q, opts);
      line << "manipulable=" << (out.manipulable ? "true" : "false") << " nodes=" << out.stats.nodes
           << " time_ms=" << fmt_ms(out.stats.elapsed_ms())
           << " witness=" << (out.witness ? format_ballot(*out.witness, ',') : "none");
      break;
    }
    case Algorithm::csl: {
      const auto out = csl_possible_winners(profile, a.weight, opts);
      const bool in = std::find(out.winners.begin(), out.winners.end(), chosen) != out.winners.end();
      line << "manipulable=" << (in ? "true" : "false") << " nodes=" << out.stats.nodes
           << " time_ms=" << fmt_ms(out.stats.elapsed_ms()) << " witness=none"
           << " winners=" << out.winners.size() << " winner_set=" << join_ids(out.winners);
      break;
    }
    case Algorithm::oracle: {
      OracleBudget budget;
      budget.max_m = a.oracle_max_m;
      using Clock = std::chrono::steady_clock;
      const auto start = Clock::now();
      const auto out = brute_force_manipulable(q, opts.tie_break, budget);
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      line << "manipulable=" << (out.manipulable ? "true" : "false") << " nodes=" << out.enumerations
           << " time_ms=" << fmt_ms(ms)
           << " witness=" << (out.witness ? format_ballot(*out.witness, ',') : "none");
      break;
    }
  }
  std::cout << line.str() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string spec_file;
  std::string model;
  double b = 0.0;
  std::string axis_order;
  std::string dataset;
  std::string axis;
  int m = 0;
  int n = 0;
  Weight w = 1;
  std::string points;
  int trials = 0;
  std::string algorithm;
  std::string tie_break;
  std::string branch_order;
  std::uint64_t seed = 0;
  bool timing = false;
  int jobs = 1;
  int oracle_max_m = 0;
  std::string out;
  CLI::App* app = nullptr;
};

bool given(const BenchArgs& a, const char* flag) { return a.app->get_option(flag)->count() > 0; }

SweepSpec build_sweep(const BenchArgs& a) {
  SweepSpec spec;
  if (!a.spec_file.empty()) {
    const auto base = std::filesystem::path(a.spec_file).parent_path().string();
    spec = parse_sweep_spec(read_text_file(a.spec_file), base.empty() ? "." : base);
  }
  try {
    if (given(a, "--model")) spec.model.model = parse_vote_model(a.model);
    if (given(a, "--b")) spec.model.b = a.b;
    if (given(a, "--axis-order")) spec.model.axis = parse_id_list(a.axis_order);
    if (given(a, "--dataset")) spec.model.dataset = std::make_shared<const Profile>(read_profile_file(a.dataset));
    if (given(a, "--axis")) spec.axis = parse_sweep_axis(a.axis);
    if (given(a, "--m")) spec.m = a.m;
    if (given(a, "--n")) spec.n = a.n;
    if (given(a, "--w")) spec.w = a.w;
    if (given(a, "--points")) {
      spec.points.clear();
      for (Candidate c : parse_id_list(a.points)) spec.points.push_back(c.id);
    }
    if (given(a, "--trials")) spec.trials = a.trials;
    if (given(a, "--algorithm")) {
      if (a.algorithm == "both")
        spec.algorithms = {Algorithm::improved, Algorithm::csl};
      else
        spec.algorithms = {parse_algorithm(a.algorithm)};
    }
    if (given(a, "--tie-break")) spec.options.tie_break = parse_tie_break(a.tie_break);
    if (given(a, "--branch-order")) spec.options.branch_order = parse_branch_order(a.branch_order);
    if (given(a, "--seed")) spec.seed = a.seed;
    if (given(a, "--timing")) spec.timing = a.timing;
    if (given(a, "--jobs")) spec.jobs = a.jobs;
    if (given(a, "--oracle-max-m")) spec.budget.max_m = a.oracle_max_m;
    resolve_points(spec);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const bool urnish =
      spec.model.model == VoteModel::urn || spec.model.model == VoteModel::single_peaked_urn;
  if (urnish && !given(a, "--b") && a.spec_file.empty())
    throw UsageError("--b is required for an urn model");
  if (spec.model.model == VoteModel::dataset && !spec.model.dataset)
    throw UsageError("--dataset is required for --model dataset");
  if (spec.trials < 1) throw UsageError("--trials must be >= 1");
  if (spec.jobs < 1) throw UsageError("--jobs must be >= 1");
  return spec;
}

int cmd_bench(const BenchArgs& a) {
  const SweepSpec spec = build_sweep(a);
  std::error_code ec;
  std::filesystem::remove(a.out, ec);
  run_sweep(spec, [&](const ResultRow& row) {
    append_result_row(row, a.out);
    std::cout << row.model << " m=" << row.m << " n=" << row.n << " w=" << row.w
              << " p_manip=" << row.p_manip << " mean_nodes=" << row.mean_nodes << '\n'
              << std::flush;
  });
  return kOk;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string csv;
  std::string model;
  int n = -1;
  int m = -1;
  Weight w = -1;
  std::string tie_break;
  std::string branch_order;
};

int cmd_fit(const FitArgs& a) {
  const auto rows = parse_result_csv(read_text_file(a.csv));
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (!a.model.empty() && r.model != a.model) continue;
    if (a.n >= 0 && r.n != a.n) continue;
    if (a.m >= 0 && r.m != a.m) continue;
    if (a.w >= 0 && r.w != a.w) continue;
    if (!a.tie_break.empty() && r.tie_break != a.tie_break) continue;
    if (!a.branch_order.empty() && r.branch_order != a.branch_order) continue;
    pts.emplace_back(static_cast<double>(r.m), r.mean_nodes);
  }
  if (pts.size() < 3)
    throw UsageError("fit needs at least 3 matching rows, found " + std::to_string(pts.size()));
  FitResult fit;
  try {
    fit = fit_exponential(pts);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "a=%.6g b=%.6g r2=%.6g", fit.a, fit.b, fit.r_squared);
  std::cout << buf << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  int m_max = 5;
  int n_max = 8;
  int trials = 200;
  std::uint64_t seed = 1;
  int jobs = 1;
};

int cmd_check(const CheckArgs& a) {
  if (a.m_max > kOracleHardMaxM) throw UsageError("--m-max may not exceed " + std::to_string(kOracleHardMaxM));
  if (a.m_max < 2 || a.n_max < 1 || a.trials < 1) throw UsageError("--m-max >= 2, --n-max >= 1, --trials >= 1");
  CheckConfig cfg;
  cfg.m_max = a.m_max;
  cfg.n_max = a.n_max;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.jobs = a.jobs;
  const auto report = run_check(cfg);
  std::cout << "instances=" << report.instances << " agreements=" << report.agreements
            << " disagreements=" << report.disagreements << '\n';
  if (report.counterexample) {
    std::cout << *report.counterexample;
    return kIo;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STV manipulation solver and benchmark harness"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random profile");
  g->add_option("--model", gen.model, "ic | urn | sp_urn | dataset")->capture_default_str();
  g->add_option("--m", gen.m, "Number of candidates")->required();
  g->add_option("--n", gen.n, "Number of agents")->required();
  gen.b_opt = g->add_option("--b", gen.b, "Urn correlation b = a/m!");
  g->add_option("--axis", gen.axis, "Single-peaked axis, comma-separated ids");
  gen.dataset_opt = g->add_option("--dataset", gen.dataset, "Source profile for --model dataset");
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.out, "Output file (stdout if omitted)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Decide whether the chosen candidate can be made to win");
  s->add_option("profile", solve.profile, "Profile file")->required();
  s->add_option("--chosen", solve.chosen)->required();
  s->add_option("--weight", solve.weight, "Manipulator (coalition) weight")->capture_default_str();
  s->add_option("--algorithm", solve.algorithm, "improved | csl | oracle")->capture_default_str();
  s->add_option("--tie-break", solve.tie_break, "lexicographic | optimistic")->capture_default_str();
  s->add_option("--branch-order", solve.branch_order, "right_first | left_first")->capture_default_str();
  s->add_option("--oracle-max-m", solve.oracle_max_m)->capture_default_str();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run an experiment sweep and write CSV");
  bench.app = b;
  b->add_option("--spec", bench.spec_file, "Sweep spec file (key = value lines)");
  b->add_option("--model", bench.model);
  b->add_option("--b", bench.b);
  b->add_option("--axis-order", bench.axis_order);
  b->add_option("--dataset", bench.dataset);
  b->add_option("--axis", bench.axis, "vary_n | vary_m | vary_mn | vary_coalition");
  b->add_option("--m", bench.m);
  b->add_option("--n", bench.n);
  b->add_option("--w", bench.w);
  b->add_option("--points", bench.points, "Comma-separated axis values");
  b->add_option("--trials", bench.trials);
  b->add_option("--algorithm", bench.algorithm, "improved | csl | oracle | both");
  b->add_option("--tie-break", bench.tie_break);
  b->add_option("--branch-order", bench.branch_order);
  b->add_option("--seed", bench.seed);
  b->add_flag("--timing", bench.timing, "Record wall-clock time (makes output run-dependent)");
  b->add_option("--jobs", bench.jobs);
  b->add_option("--oracle-max-m", bench.oracle_max_m);
  b->add_option("--out", bench.out, "Output CSV")->required();

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit mean_nodes = a * b^m to CSV rows");
  f->add_option("csv", fit.csv)->required();
  f->add_option("--model", fit.model, "Row filter on the model column, e.g. ic/improved");
  f->add_option("--n", fit.n);
  f->add_option("--m", fit.m);
  f->add_option("--w", fit.w);
  f->add_option("--tie-break", fit.tie_break);
  f->add_option("--branch-order", fit.branch_order);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Cross-check the solver against the brute-force oracle");
  c->add_option("--m-max", check.m_max)->capture_default_str();
  c->add_option("--n-max", check.n_max)->capture_default_str();
  c->add_option("--trials", check.trials)->capture_default_str();
  c->add_option("--seed", check.seed)->capture_default_str();
  c->add_option("--jobs", check.jobs)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (s->parsed()) return cmd_solve(solve);
    if (b->parsed()) return cmd_bench(bench);
    if (f->parsed()) return cmd_fit(fit);
    if (c->parsed()) return cmd_check(check);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const BudgetExceeded& e) {
    std::cerr << "oracle: " << e.what() << '\n';
    return kBudget;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
