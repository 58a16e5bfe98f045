// Times the property-check sampling loops with OpenMP against the serial
// reference path and reports the speedup. Both paths must produce identical
// results; the benchmark asserts that before printing timings.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "equidyn/check.hpp"
#include "equidyn/family.hpp"

using namespace equidyn;

namespace {

FamilySpec bench_spec() {
  FamilySpec spec;
  spec.scenario = ScenarioId::sphere_so3;
  spec.kind = FamilyKind::standard;
  spec.n_agents = 4;
  spec.coefficients = {
      {"sin(d12) - 0.5", "cos(d13)", "0.2*d12", "d12 - d13"},
      {"0.3*cos(d12)", "0.1", "sin(d13 - d12)", "0.4*d23"},
  };
  return spec;
}

double run_once(const DynamicsFamily& fam, const CheckOptions& opt,
                std::vector<CheckResult>* out) {
  auto t0 = std::chrono::steady_clock::now();
  auto results = run_checks(fam, opt);
  auto t1 = std::chrono::steady_clock::now();
  if (out) *out = std::move(results);
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int samples = 400;
  if (argc > 1) samples = std::atoi(argv[1]);
  if (samples <= 0) {
    std::fprintf(stderr, "usage: %s [samples]\n", argv[0]);
    return 2;
  }

  DynamicsFamily fam = build_family(bench_spec());
  CheckOptions opt;
  opt.samples = samples;
  opt.group_elements = 10;

  std::printf("checks on %s, %d agents, %d samples per check\n",
              to_string(fam.scenario()).c_str(), fam.n_agents(), opt.samples);
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both runs are serial\n");
#endif

  std::vector<CheckResult> serial_results, parallel_results;
  opt.parallel = false;
  double t_serial = run_once(fam, opt, &serial_results);
  opt.parallel = true;
  double t_parallel = run_once(fam, opt, &parallel_results);

  bool identical = serial_results.size() == parallel_results.size();
  for (std::size_t i = 0; identical && i < serial_results.size(); ++i) {
    const auto& a = serial_results[i];
    const auto& b = parallel_results[i];
    identical = a.passed == b.passed && a.worst == b.worst && a.samples == b.samples &&
                a.detail == b.detail;
  }
  if (!identical) {
    std::fprintf(stderr, "serial and parallel check results differ; determinism bug\n");
    return 1;
  }

  std::printf("serial    %8.3f s\n", t_serial);
  std::printf("parallel  %8.3f s\n", t_parallel);
  std::printf("speedup   %8.2fx (identical results)\n",
              t_parallel > 0 ? t_serial / t_parallel : 0.0);
  return 0;
}
