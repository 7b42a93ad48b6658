// Timing comparison between the serial and OpenMP variants of the reduction
// kernels and the batch runner. Build and run manually:
//   cmake --build build --target bench_kernels && ./build/bench/bench_kernels

#include <chrono>
#include <cstdio>
#include <vector>

#include "clockcal/engine.hpp"
#include "clockcal/kernels.hpp"
#include "clockcal/rng.hpp"
#include "clockcal/scenario.hpp"

#ifdef CLOCKCAL_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e100;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_s();
    f();
    best = std::min(best, now_s() - t0);
  }
  return best;
}

}  // namespace

int main() {
#ifdef CLOCKCAL_HAVE_OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; parallel paths run serially\n");
#endif

  const std::size_t n = 1 << 26;  // 64M doubles
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = clockcal::rng::uniform01(1, clockcal::rng::Stream::Instance, i) - 0.5;
  }

  volatile double sink = 0.0;
  const double t_sum_s = time_best_of(3, [&] { sink = clockcal::kernels::block_sum(x, false); });
  const double t_sum_p = time_best_of(3, [&] { sink = clockcal::kernels::block_sum(x, true); });
  std::printf("block_sum      n=%zu  serial %.3fs  parallel %.3fs  speedup %.2fx\n", n,
              t_sum_s, t_sum_p, t_sum_s / t_sum_p);

  clockcal::kernels::Moments m;
  const double t_mom_s = time_best_of(3, [&] { m = clockcal::kernels::moments(x, false); });
  const double t_mom_p = time_best_of(3, [&] { m = clockcal::kernels::moments(x, true); });
  std::printf("moments        n=%zu  serial %.3fs  parallel %.3fs  speedup %.2fx\n", n,
              t_mom_s, t_mom_p, t_mom_s / t_mom_p);
  (void)sink;

  // Batch of independent runs: tracking scenario under a temperature ramp.
  clockcal::ScenarioConfig base = clockcal::default_scenario();
  base.duration_s = 120.0;
  base.temperature.kind = clockcal::ProfileKind::Ramp;
  base.temperature.ramp_rate_c_per_min = 2.0;
  base.temperature.ramp_span_c = 15.0;
  base.rf_oscillator.f_at_min_setting_hz = 2.405e9 - 160 * 90e3;
  base.rf_oscillator.setting = 160;
  base.rf_oscillator.max_setting = 481;
  base.calibrator.sweep_enabled = false;
  base.calibrator.deadband_hz = 45e3;
  std::vector<clockcal::ScenarioConfig> cfgs;
  for (int i = 0; i < 16; ++i) {
    clockcal::ScenarioConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(i + 1);
    cfgs.push_back(cfg);
  }
  const double t_batch_s = time_best_of(2, [&] { clockcal::run_batch(cfgs, false); });
  const double t_batch_p = time_best_of(2, [&] { clockcal::run_batch(cfgs, true); });
  std::printf("run_batch      n=%zu runs  serial %.3fs  parallel %.3fs  speedup %.2fx\n",
              cfgs.size(), t_batch_s, t_batch_p, t_batch_s / t_batch_p);
  return 0;
}
