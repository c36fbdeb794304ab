#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "stvmanip/errors.hpp"
#include "stvmanip/experiments.hpp"
#include "test_util.hpp"

using namespace stvm;

namespace {

PointSpec point(VoteModel model, int m, int n, int trials, std::uint64_t seed) {
  PointSpec p;
  p.model.model = model;
  p.model.b = model == VoteModel::ic ? 0.0 : 1.0;
  p.m = m;
  p.n = n;
  p.trials = trials;
  p.seed = seed;
  return p;
}

void check_same(const StatSummary& a, const StatSummary& b) {
  CHECK(a.trials == b.trials);
  CHECK(a.successes == b.successes);
  CHECK(a.mean_nodes == b.mean_nodes);
  CHECK(a.median_nodes == b.median_nodes);
  CHECK(a.p90_nodes == b.p90_nodes);
}

}  // namespace

TEST_CASE("degenerate points are always manipulable") {
  for (auto model : {VoteModel::ic, VoteModel::urn, VoteModel::single_peaked_urn}) {
    CHECK(run_point(point(model, 1, 9, 50, 3)).p_manip == 1.0);
    for (int m : {2, 5, 12}) CHECK(run_point(point(model, m, 0, 50, 3)).p_manip == 1.0);
  }
}

TEST_CASE("summaries") {
  std::vector<TrialRecord> recs{{true, 4, 1.0}, {false, 1, 3.0}, {true, 10, 2.0}, {false, 2, 2.0}};
  const auto s = summarize(recs, true);
  CHECK(s.trials == 4);
  CHECK(s.successes == 2);
  CHECK(s.p_manip == 0.5);
  CHECK(s.mean_nodes == 4.25);
  CHECK(s.median_nodes == 3.0);
  CHECK(s.p90_nodes == doctest::Approx(8.2));
  CHECK(s.mean_time_ms == 2.0);
  CHECK(std::isnan(summarize(recs, false).mean_time_ms));
}

TEST_CASE("small-scale regime: improved beats CSL at m = n = 16") {
  PointSpec imp = point(VoteModel::ic, 16, 16, 200, 11);
  PointSpec csl = imp;
  csl.solver.algorithm = Algorithm::csl;
  const auto a = run_point(imp);
  const auto b = run_point(csl);
  CHECK(a.mean_nodes < b.mean_nodes);
  CHECK(a.mean_nodes < 200);
  CHECK(a.p_manip == b.p_manip);
}

TEST_CASE("OpenMP and serial points agree") {
  for (auto alg : {Algorithm::improved, Algorithm::csl, Algorithm::oracle}) {
    for (auto tie : {TieBreak::lexicographic, TieBreak::optimistic}) {
      PointSpec p = point(VoteModel::urn, alg == Algorithm::oracle ? 5 : 9, 9, 120, 21);
      p.solver.algorithm = alg;
      p.solver.options.tie_break = tie;
      const auto serial = run_point_serial(p);
      p.jobs = 4;
      check_same(serial, run_point(p));
      p.jobs = 3;
      check_same(serial, run_point(p));
    }
  }
}

TEST_CASE("trials are pure functions of the point and index") {
  PointSpec p = point(VoteModel::ic, 7, 7, 30, 99);
  const auto a = run_trial(p, 17);
  p.trials = 1000;
  const auto b = run_trial(p, 17);
  CHECK(a.manipulable == b.manipulable);
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("algorithms agree on decisions at small m") {
  for (auto tie : {TieBreak::lexicographic, TieBreak::optimistic}) {
    PointSpec p = point(VoteModel::ic, 5, 6, 300, 5);
    p.solver.options.tie_break = tie;
    const auto imp = run_point(p);
    p.solver.algorithm = Algorithm::csl;
    const auto csl = run_point(p);
    p.solver.algorithm = Algorithm::oracle;
    const auto ora = run_point(p);
    CHECK(imp.successes == csl.successes);
    CHECK(imp.successes == ora.successes);
  }
}

TEST_CASE("axis helpers") {
  CHECK(coalition_axis(16) == std::vector<int>{1, 2, 4, 8, 16});
  CHECK(coalition_axis(1) == std::vector<int>{1});
  CHECK(coalition_axis(4) == std::vector<int>{1, 2, 4});
  for (int n = 1; n <= 300; ++n) {
    const auto ks = coalition_axis(n);
    REQUIRE(ks.front() >= 1);
    REQUIRE(ks.back() <= n);
    for (std::size_t i = 1; i < ks.size(); ++i) REQUIRE(ks[i] > ks[i - 1]);
  }
  CHECK_THROWS_AS(coalition_axis(0), InvalidInput);
  CHECK(powers_of_two(1, 128) == std::vector<int>{1, 2, 4, 8, 16, 32, 64, 128});
  CHECK(powers_of_two(3, 20) == std::vector<int>{4, 8, 16});

  SweepSpec s;
  s.points = {4, 2};
  CHECK_THROWS_AS(resolve_points(s), InvalidInput);
}

TEST_CASE("fit_exponential") {
  std::vector<std::pair<double, double>> exact;
  for (int m : {4, 8, 16, 32, 64}) exact.emplace_back(m, 2 * std::pow(1.01, m));
  const auto f = fit_exponential(exact);
  CHECK(std::abs(f.b - 1.01) < 1e-9);
  CHECK(std::abs(f.a - 2.0) < 1e-9);
  CHECK(f.r_squared == doctest::Approx(1.0));

  const std::vector<std::pair<double, double>> flat{{4, 7}, {8, 7}, {16, 7}};
  const auto g = fit_exponential(flat);
  CHECK(g.b == doctest::Approx(1.0));
  CHECK(g.r_squared == 1.0);

  const std::vector<std::pair<double, double>> two{{4, 7}, {8, 7}};
  CHECK_THROWS_AS(fit_exponential(two), InvalidInput);
  const std::vector<std::pair<double, double>> zero{{4, 7}, {8, 0}, {16, 7}};
  CHECK_THROWS_AS(fit_exponential(zero), InvalidInput);
  const std::vector<std::pair<double, double>> same_m{{4, 7}, {4, 8}, {4, 9}};
  CHECK_THROWS_AS(fit_exponential(same_m), InvalidInput);
}

TEST_CASE("sweeps") {
  SweepSpec s;
  s.m = 4;
  s.trials = 300;
  s.algorithms = {Algorithm::improved, Algorithm::csl};
  std::vector<ResultRow> streamed;
  const auto rows = run_sweep(s, [&](const ResultRow& r) { streamed.push_back(r); });
  REQUIRE(rows.size() == 16);
  CHECK(format_result_csv(streamed) == format_result_csv(rows));
  CHECK(rows[0].model == "ic/improved");
  CHECK(rows[1].model == "ic/csl");
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].n == rows[i + 1].n);
    CHECK(rows[i].p_manip == rows[i + 1].p_manip);
    CHECK(rows[i].mean_nodes <= rows[i + 1].mean_nodes);
    CHECK(std::isnan(rows[i].mean_time_ms));
  }
  // Fewer agents, more room to manipulate: compare the ends of the axis.
  CHECK(rows.front().p_manip > rows.back().p_manip + 0.2);

  s.jobs = 4;
  CHECK(format_result_csv(run_sweep(s)) == format_result_csv(rows));
  s.seed = 2;
  CHECK(format_result_csv(run_sweep(s)) != format_result_csv(rows));
}

TEST_CASE("coalition sweep grows with k") {
  SweepSpec s;
  s.axis = SweepAxis::vary_coalition;
  s.m = 8;
  s.n = 16;
  s.trials = 300;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].p_manip >= rows[i - 1].p_manip - 0.05);
  CHECK(rows.back().p_manip > rows.front().p_manip);
  CHECK(rows.back().w == 16);
}

TEST_CASE("sweep spec files") {
  const auto dir = std::filesystem::temp_directory_path() / "stvm_spec_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "d.txt") << "m 3\n2: 1 2 3\n1: 3 1 2\n";
  }
  const auto s = parse_sweep_spec(
      "# a comment\nmodel = dataset\ndataset = d.txt\naxis = vary_m\npoints = 2, 3,6\n"
      "n = 12\nw = 2\ntrials = 40\nalgorithm = both\ntie_break = optimistic\nbranch_order = left_first\n"
      "seed = 77\ntiming = true\njobs = 3\noracle_max_m = 9\n",
      dir.string());
  CHECK(s.model.model == VoteModel::dataset);
  REQUIRE(s.model.dataset);
  CHECK(s.model.dataset->m() == 3);
  CHECK(s.axis == SweepAxis::vary_m);
  CHECK(s.points == std::vector<int>{2, 3, 6});
  CHECK(s.n == 12);
  CHECK(s.w == 2);
  CHECK(s.trials == 40);
  CHECK(s.algorithms == std::vector<Algorithm>{Algorithm::improved, Algorithm::csl});
  CHECK(s.options.tie_break == TieBreak::optimistic);
  CHECK(s.options.branch_order == BranchOrder::left_first);
  CHECK(s.seed == 77);
  CHECK(s.timing);
  CHECK(s.jobs == 3);
  CHECK(s.budget.max_m == 9);

  const auto rows = run_sweep(s);
  CHECK(rows.size() == 6);
  CHECK(rows[0].model == "dataset/improved");
  CHECK(rows[5].m == 6);

  const auto sp = parse_sweep_spec("model = sp_urn\nb = 0.25\naxis_order = 2 1 3 4\nm = 4\n");
  CHECK(sp.model.model == VoteModel::single_peaked_urn);
  CHECK(sp.model.b == 0.25);
  CHECK(sp.model.axis == testutil::ids({2, 1, 3, 4}));

  CHECK_THROWS_AS(parse_sweep_spec("bogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_sweep_spec("m = x\n"), ParseError);
  CHECK_THROWS_AS(parse_sweep_spec("no equals sign\n"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cross-check") {
  CheckConfig cfg;
  cfg.m_max = 4;
  cfg.n_max = 5;
  cfg.trials = 20;
  const auto ok = run_check(cfg);
  CHECK(ok.instances == 3u * 5 * 2 * 2 * 2 * 20);
  CHECK(ok.disagreements == 0);
  CHECK(ok.agreements == ok.instances);
  CHECK_FALSE(ok.counterexample);

  cfg.jobs = 4;
  const auto par = run_check(cfg);
  CHECK(par.agreements == ok.agreements);

  // A solver that never finds a manipulation must be caught, with a profile
  // that replays the disagreement.
  const Decider mutant = [](const ManipulationQuery& q, const SolverOptions& o) {
    SolveOutcome out = manipulate_improved(q, o);
    out.manipulable = false;
    out.witness.reset();
    return out;
  };
  const auto bad = run_check(cfg, mutant);
  CHECK(bad.disagreements > 0);
  REQUIRE(bad.counterexample);
  const std::string& text = *bad.counterexample;
  CHECK(text.rfind("# disagreement:", 0) == 0);

  const Profile replay = parse_profile(text);
  const auto field = [&](const std::string& key) {
    const auto at = text.find(" " + key + "=");
    REQUIRE(at != std::string::npos);
    return text.substr(at + key.size() + 2, text.find_first_of(" \n", at + 1 + key.size() + 1) - (at + key.size() + 2));
  };
  const Candidate chosen{std::stoi(field("chosen"))};
  const Weight w = std::stoll(field("w"));
  const TieBreak tie = parse_tie_break(field("tie_break"));
  CHECK(replay.m() == std::stoi(field("m")));
  CHECK(brute_force_manipulable({replay, chosen, w}, tie).manipulable);
  CHECK_FALSE(mutant({replay, chosen, w}, {tie, BranchOrder::right_first}).manipulable);

  // Same configuration, same report.
  const auto again = run_check(cfg, mutant);
  CHECK(again.disagreements == bad.disagreements);
  CHECK(again.counterexample == bad.counterexample);
}
