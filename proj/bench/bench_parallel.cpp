// Times run_point_serial against the OpenMP run_point on the same trials and
// checks that both produce the same summary.
//
//   bench_parallel [--m 16] [--n 16] [--trials 2000] [--jobs N] [--algorithm improved|csl]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "stvmanip/experiments.hpp"

using namespace stvm;

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  PointSpec spec;
  spec.m = 16;
  spec.n = 16;
  spec.trials = 2000;
  spec.seed = 1;
  spec.jobs = omp_get_max_threads();
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    const char* val = argv[i + 1];
    if (flag == "--m") spec.m = std::atoi(val);
    else if (flag == "--n") spec.n = std::atoi(val);
    else if (flag == "--trials") spec.trials = std::atoi(val);
    else if (flag == "--jobs") spec.jobs = std::atoi(val);
    else if (flag == "--algorithm") spec.solver.algorithm = parse_algorithm(val);
    else {
      std::fprintf(stderr, "unknown flag %s\n", flag.c_str());
      return 2;
    }
  }

  StatSummary serial, parallel;
  const double ts = seconds([&] { serial = run_point_serial(spec); });
  const double tp = seconds([&] { parallel = run_point(spec); });
  const bool same = serial.successes == parallel.successes && serial.mean_nodes == parallel.mean_nodes &&
                    serial.p90_nodes == parallel.p90_nodes;

  std::printf("%s m=%d n=%d trials=%d\n", to_string(spec.solver.algorithm), spec.m, spec.n, spec.trials);
  std::printf("serial    %8.3f s\n", ts);
  std::printf("openmp x%-2d %7.3f s  speedup %.2fx\n", spec.jobs, tp, ts / tp);
  std::printf("p_manip=%.4f mean_nodes=%.3f results %s\n", serial.p_manip, serial.mean_nodes,
              same ? "identical" : "DIFFER");
  return same ? 0 : 1;
}
