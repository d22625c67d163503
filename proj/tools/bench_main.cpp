// Times the OpenMP kernels against their serial reference implementations:
// homogeneous grid evaluation, simulation replications and multi-start
// optimization.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoinet/homogeneous.hpp"
#include "aoinet/model.hpp"
#include "aoinet/mspadam.hpp"
#include "aoinet/simulator.hpp"

using namespace aoinet;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* kernel, double serial_ms, double parallel_ms) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx\n", kernel, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

NetworkModel make_model(int n, std::uint64_t seed) {
  NetworkModel model;
  model.n = n;
  model.aoi_cap = 20;
  model.power = {100.0, 1.0, 1e6};
  model.correlation = generate_correlation({n, 1.0, 0.0, 0.5, 1.0, seed});
  return model;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n");
#endif
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    const NetworkModel model = make_model(100, 1);
    const ObjectiveWeights w{0.1, 1.0};
    const std::vector<double> qs = homo::uniform_grid(0.0, 1.0, 2e-5);
    std::vector<homo::SweepRow> serial, parallel;
    const double ts = time_ms([&] { serial = homo::evaluate_grid_serial(model, w, qs); });
    const double tp = time_ms([&] { parallel = homo::evaluate_grid(model, w, qs); });
    report("homogeneous grid", ts, tp);
    if (serial != parallel) std::printf("  MISMATCH in grid rows\n");
  }

  {
    sim::SimConfig cfg;
    cfg.model = make_model(20, 2);
    cfg.policy = broadcast_policy(20, 0.05);
    cfg.horizon = 200000;
    cfg.warmup = 1000;
    cfg.seed = 7;
    sim::ReplicateSummary rs, rp;
    const double ts = time_ms([&] { rs = sim::replicate_serial(cfg, 16); });
    const double tp = time_ms([&] { rp = sim::replicate(cfg, 16); });
    report("replications x16", ts, tp);
    if (rs.mean_aoi != rp.mean_aoi) std::printf("  MISMATCH in replicate means\n");
  }

  {
    const NetworkModel model = make_model(12, 3);
    mspadam::OptimizerConfig cfg;
    cfg.seed = 11;
    mspadam::OptimizationResult rs, rp;
    const double ts = time_ms([&] { rs = mspadam::optimize_serial(model, cfg); });
    const double tp = time_ms([&] { rp = mspadam::optimize(model, cfg); });
    report("mspadam starts x10", ts, tp);
    if (rs.q_star != rp.q_star) std::printf("  MISMATCH in optimizer output\n");
  }
  return 0;
}
