// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits with the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "clockcal/engine.hpp"
#include "clockcal/rng.hpp"
#include "clockcal/scenario.hpp"

using namespace clockcal;

namespace {

#ifndef CLOCKCAL_SCENARIO_DIR
#define CLOCKCAL_SCENARIO_DIR "scenarios"
#endif

constexpr int kSeeds = 100;
constexpr int kSeedsRequired = 95;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  if (!pass) {
    ++g_failures;
  }
}

ScenarioConfig load(const char* name) {
  return load_scenario(std::string(CLOCKCAL_SCENARIO_DIR) + "/" + name);
}

std::vector<RunResult> run_seeds(const ScenarioConfig& base, int seeds) {
  std::vector<ScenarioConfig> cfgs;
  cfgs.reserve(static_cast<std::size_t>(seeds));
  for (int s = 1; s <= seeds; ++s) {
    ScenarioConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(s);
    cfgs.push_back(cfg);
  }
  return run_batch(cfgs, true);
}

double parse_after(const std::string& s, const std::string& key) {
  const std::size_t pos = s.find(key);
  if (pos == std::string::npos) {
    return std::nan("");
  }
  return std::stod(s.substr(pos + key.size()));
}

// Fine-calibration decision means, in trace order.
std::vector<double> fine_means(const std::vector<TraceRecord>& trace) {
  std::vector<double> means;
  for (const TraceRecord& r : trace) {
    if (r.event.find("FINE_STEP") != std::string::npos ||
        r.event.find("FINE_HOLD") != std::string::npos) {
      means.push_back(parse_after(r.event, "mean_ppm="));
    }
  }
  return means;
}

double mean_rf_ppm(const std::vector<TraceRecord>& trace, double from_s) {
  double sum = 0.0;
  long long n = 0;
  for (const TraceRecord& r : trace) {
    if (r.time_s >= from_s) {
      sum += r.rf_ppm;
      ++n;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : std::nan("");
}

// --------------------------------------------------------------------------
// 1. Cold-start acquisition: -850 ppm start, |rf_ppm| <= 40 after FINISH and
//    sweep time <= 45 s, in >= 95/100 seeds, < 1 s of wall time per run.
// --------------------------------------------------------------------------
void criterion_1() {
  const ScenarioConfig base = load("cold_start_search.json");

  // Wall-clock check on serial runs.
  double worst_wall = 0.0;
  for (int s = 1; s <= 3; ++s) {
    ScenarioConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto t0 = std::chrono::steady_clock::now();
    run_scenario(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst_wall = std::max(worst_wall, wall);
  }

  const auto results = run_seeds(base, kSeeds);
  int pass_seeds = 0;
  int pass_ppm = 0;
  int pass_time = 0;
  double sweep_time_sum = 0.0;
  for (const RunResult& r : results) {
    if (r.summary.never_locked) {
      continue;
    }
    sweep_time_sum += r.summary.time_to_lock_s;
    const bool ppm_ok = std::abs(mean_rf_ppm(r.trace, r.summary.time_to_lock_s)) <= 40.0;
    const bool time_ok = r.summary.time_to_lock_s <= 45.0;
    pass_ppm += ppm_ok;
    pass_time += time_ok;
    pass_seeds += ppm_ok && time_ok;
  }
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%d/%d seeds; |rf_ppm|<=40 in %d, sweep<=45s in %d, mean sweep %.1fs, "
                "max wall %.3fs",
                pass_seeds, kSeeds, pass_ppm, pass_time, sweep_time_sum / kSeeds, worst_wall);
  report(1, pass_seeds >= kSeedsRequired && worst_wall < 1.0, "cold-start acquisition",
         detail);
}

// --------------------------------------------------------------------------
// 2. Fast calibration: +8000 ppm start; |chip_ppm| <= 1000 right after the
//    single fast correction, >= 95/100 seeds.
// --------------------------------------------------------------------------
void criterion_2() {
  ScenarioConfig base = load("chip_calibration.json");
  base.duration_s = 30.0;
  const auto results = run_seeds(base, kSeeds);
  int pass_seeds = 0;
  for (const RunResult& r : results) {
    bool seen_fast = false;
    bool ok = false;
    for (const TraceRecord& row : r.trace) {
      if (seen_fast) {
        ok = std::abs(row.chip_ppm) <= 1000.0;
        break;
      }
      if (row.event.find("FAST_CAL") != std::string::npos) {
        seen_fast = true;
      }
    }
    pass_seeds += seen_fast && ok;
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%d/%d seeds within 1000 ppm after FAST_CAL",
                pass_seeds, kSeeds);
  report(2, pass_seeds >= kSeedsRequired, "fast calibration", detail);
}

// --------------------------------------------------------------------------
// 3. Fine calibration window: N = 10, +/-400 ppm, constant temperature; every
//    decision after the second stays inside the window over a 5-minute run.
// --------------------------------------------------------------------------
void criterion_3() {
  const ScenarioConfig base = load("chip_calibration.json");
  const auto results = run_seeds(base, kSeeds);
  int pass_seeds = 0;
  for (const RunResult& r : results) {
    const std::vector<double> means = fine_means(r.trace);
    if (means.size() < 3) {
      continue;
    }
    bool ok = true;
    for (std::size_t i = 2; i < means.size(); ++i) {
      ok = ok && std::abs(means[i]) <= 400.0;
    }
    pass_seeds += ok;
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%d/%d seeds inside the window after decision 2",
                pass_seeds, kSeeds);
  report(3, pass_seeds >= kSeedsRequired, "fine calibration window", detail);
}

// --------------------------------------------------------------------------
// 4. RF tracking under a 2 C/min ramp: rf_ppm within +/-40 for >= 99% of
//    post-lock beacon instants outside the loss burst, and recovery within
//    two receptions after the burst.
// --------------------------------------------------------------------------
struct Criterion4Result {
  int pass_seeds = 0;
  int recovery_pass = 0;
  double median_coverage = 0.0;
};

Criterion4Result eval_criterion_4(const ScenarioConfig& base) {
  const double burst_start = base.receiver.loss_bursts.at(0).first;
  const double burst_end = base.receiver.loss_bursts.at(0).second;
  const auto results = run_seeds(base, kSeeds);
  Criterion4Result out;
  std::vector<double> coverages;
  for (const RunResult& r : results) {
    // Reception rows: the rx counter incremented on this row.
    long long prev_rx = 0;
    double r1 = -1.0;
    double r2 = -1.0;
    double rf1 = 0.0;
    double rf2 = 0.0;
    for (const TraceRecord& row : r.trace) {
      const bool was_rx = row.beacons_rx_total > prev_rx;
      prev_rx = row.beacons_rx_total;
      if (was_rx && row.time_s >= burst_end && r2 < 0.0) {
        if (r1 < 0.0) {
          r1 = row.time_s;
          rf1 = row.rf_ppm;
        } else {
          r2 = row.time_s;
          rf2 = row.rf_ppm;
        }
      }
    }
    const bool recovered = (r1 >= 0.0 && std::abs(rf1) <= 40.0) ||
                           (r2 >= 0.0 && std::abs(rf2) <= 40.0);
    out.recovery_pass += recovered;

    long long inside = 0;
    long long total = 0;
    for (const TraceRecord& row : r.trace) {
      if (row.time_s >= burst_start && (r2 < 0.0 || row.time_s <= r2)) {
        continue;  // burst and recovery window excluded
      }
      ++total;
      inside += std::abs(row.rf_ppm) <= 40.0;
    }
    const double coverage = total > 0 ? static_cast<double>(inside) / total : 0.0;
    coverages.push_back(coverage);
    out.pass_seeds += recovered && coverage >= 0.99;
  }
  std::sort(coverages.begin(), coverages.end());
  out.median_coverage = coverages[coverages.size() / 2];
  return out;
}

void criterion_4() {
  const ScenarioConfig base = load("rf_tracking_ramp.json");
  const Criterion4Result res = eval_criterion_4(base);
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%d/%d seeds at >=99%% coverage (median coverage %.2f%%), recovery<=2 rx in %d",
                res.pass_seeds, kSeeds, res.median_coverage * 100.0, res.recovery_pass);
  report(4, res.pass_seeds >= kSeedsRequired, "RF tracking under ramp", detail);

  // Informational: the same loop under the random-walk noise option. The
  // white-noise default puts ~1.9% of the samples outside +/-40 ppm even for
  // a perfectly centered loop, which caps coverage below the 99% bar.
  ScenarioConfig walk = base;
  walk.rf_oscillator.noise_model = NoiseModel::RandomWalk;
  walk.rf_oscillator.noise_correlation_time_s = 600.0;
  walk.chipping_oscillator.noise_model = NoiseModel::RandomWalk;
  const Criterion4Result wres = eval_criterion_4(walk);
  std::printf("       info: with noise_model=random_walk: %d/%d seeds, median coverage %.2f%%\n",
              wres.pass_seeds, kSeeds, wres.median_coverage * 100.0);
}

// --------------------------------------------------------------------------
// 5. Chipping under the same ramp with fine calibration on: windowed mean
//    within +/-400 ppm for >= 95% of decisions.
// --------------------------------------------------------------------------
void criterion_5() {
  const ScenarioConfig base = load("chip_tracking_ramp.json");
  const auto results = run_seeds(base, kSeeds);
  int pass_seeds = 0;
  double worst = 1.0;
  for (const RunResult& r : results) {
    worst = std::min(worst, r.summary.fraction_within_window);
    pass_seeds += r.summary.fraction_within_window >= 0.95;
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%d/%d seeds, worst fraction_within_window %.4f",
                pass_seeds, kSeeds, worst);
  report(5, pass_seeds >= kSeedsRequired, "chipping under ramp", detail);
}

// --------------------------------------------------------------------------
// 6. Model self-consistency: frozen calibration, >= 10000 beacon intervals;
//    sample 2-sigma of rf_ppm in [27.3, 40.9] and chip_ppm in [222.8, 334.2].
// --------------------------------------------------------------------------
void criterion_6() {
  const ScenarioConfig base = load("const_temp_baseline.json");
  const RunResult r = run_scenario(base);
  const double rf2s = r.summary.post_lock_rf_ppm_2sigma;
  const double chip2s = r.summary.post_lock_chip_ppm_2sigma;
  const bool intervals_ok = r.summary.beacons_rx + r.summary.beacons_lost >= 10000;
  const bool ok = intervals_ok && rf2s >= 27.3 && rf2s <= 40.9 && chip2s >= 222.8 &&
                  chip2s <= 334.2;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "rf 2sigma %.2f ppm, chip 2sigma %.2f ppm over %lld beacons",
                rf2s, chip2s, r.summary.beacons_rx + r.summary.beacons_lost);
  report(6, ok, "model self-consistency", detail);
}

// --------------------------------------------------------------------------
// 7. Open-loop drift: calibration disabled, 10 C ramp; final errors match the
//    tempco arithmetic within 1% plus the noise band of the tail average.
// --------------------------------------------------------------------------
void criterion_7() {
  const ScenarioConfig base = load("open_loop_ramp.json");
  const auto results = run_seeds(base, kSeeds);
  const double tail_from = base.duration_s - 10.0;
  int pass_seeds = 0;
  double worst_rf = 0.0;
  double worst_chip = 0.0;
  for (const RunResult& r : results) {
    double rf_sum = 0.0;
    double chip_sum = 0.0;
    long long n = 0;
    for (const TraceRecord& row : r.trace) {
      if (row.time_s >= tail_from) {
        rf_sum += row.rf_ppm;
        chip_sum += row.chip_ppm;
        ++n;
      }
    }
    if (n == 0) {
      continue;
    }
    const double rf_mean = rf_sum / n;
    const double chip_mean = chip_sum / n;
    const double rf_band = 0.01 * 486.4 + 4.0 * 17.05 / std::sqrt(static_cast<double>(n));
    const double chip_band = 0.01 * 3550.0 + 4.0 * 139.25 / std::sqrt(static_cast<double>(n));
    const double rf_err = std::abs(rf_mean - (-486.4));
    const double chip_err = std::abs(chip_mean - 3550.0);
    worst_rf = std::max(worst_rf, rf_err);
    worst_chip = std::max(worst_chip, chip_err);
    pass_seeds += rf_err <= rf_band && chip_err <= chip_band;
  }
  char detail[192];
  std::snprintf(detail, sizeof(detail),
                "%d/%d seeds; worst |rf - (-486.4)| = %.2f ppm, worst |chip - 3550| = %.2f ppm",
                pass_seeds, kSeeds, worst_rf, worst_chip);
  report(7, pass_seeds >= kSeedsRequired, "open-loop drift", detail);
}

// --------------------------------------------------------------------------
// 8. Oracle equivalence: the sweep FINISH setting matches a brute-force
//    argmax (midpoint tie rule) over all settings on 50 random instances.
// --------------------------------------------------------------------------
ScenarioConfig make_instance(int inst) {
  const std::uint64_t gseed = static_cast<std::uint64_t>(1000 + inst);
  auto u = [&](std::uint64_t j) { return rng::uniform01(gseed, rng::Stream::Instance, j); };

  const double delta_f = 70e3 + u(0) * 80e3;
  const int a = 1 + static_cast<int>(u(2) * 4.0);        // target first rx setting
  const int max_setting = a + 26 + static_cast<int>(u(1) * (40 - a - 26 + 1));
  const double hw_cap = ((max_setting - a - 3) * delta_f - 1.0e6) / 2.0;
  const double hw = 0.3e6 + u(3) * (std::min(0.9e6, hw_cap) - 0.3e6);
  const double f_c = 30e6 + u(4) * 30e6;
  const double tx_ppm = (u(5) - 0.5) * 20.0;
  const double frac = 0.05 + 0.9 * u(6);
  const double period = 0.08 + u(7) * 0.12;
  const double t_l = 0.5 + u(8) * 1.0;
  const double phase = u(9) * period;
  const double loss_prob = (inst % 2 == 1) ? 0.3 * u(10) : 0.0;

  ScenarioConfig cfg = default_scenario();
  cfg.seed = gseed;
  cfg.duration_s = (max_setting + 2) * t_l + 1.0;
  cfg.sub_step_s = period / 10.0;
  cfg.rf_oscillator.f_nominal_hz = f_c;
  cfg.rf_oscillator.delta_f_hz = delta_f;
  cfg.rf_oscillator.setting = 0;
  cfg.rf_oscillator.max_setting = max_setting;
  cfg.rf_oscillator.noise_sigma_ppm = 0.0;
  cfg.rf_oscillator.f_at_min_setting_hz =
      f_c * (1.0 + tx_ppm * 1e-6) - hw - (a + frac) * delta_f;
  cfg.chipping_oscillator.noise_sigma_ppm = 0.0;
  cfg.beacon.f_c_hz = f_c;
  cfg.beacon.period_s = period;
  cfg.beacon.tx_ppm_error = tx_ppm;
  cfg.beacon.phase_s = phase;
  cfg.receiver.capture_halfwidth_hz = hw;
  cfg.receiver.loss_prob = loss_prob;
  cfg.calibrator.t_L = t_l;
  cfg.calibrator.sweep_enabled = true;
  cfg.calibrator.if_track_enabled = false;
  cfg.calibrator.chip_cal_enabled = false;
  cfg.calibrator.deadband_hz = delta_f / 2.0;
  return cfg;
}

// Independent enumeration: per-setting CRC-OK counts from the beacon and
// dwell schedules, then argmax with the midpoint tie rule.
int oracle_best_setting(const ScenarioConfig& cfg) {
  const long long dwell_ns = std::llround(cfg.calibrator.t_L * 1e9);
  const long long period_ns = std::llround(beacon_step_s(cfg.beacon) * 1e9);
  const long long phase_ns = std::llround(cfg.beacon.phase_s * 1e9);
  const long long duration_ns = std::llround(cfg.duration_s * 1e9);
  const double carrier = carrier_hz(cfg.beacon);
  const int max_setting = cfg.rf_oscillator.max_setting;

  std::vector<int> counts(static_cast<std::size_t>(max_setting) + 1, 0);
  for (long long k = 0;; ++k) {
    const long long t = phase_ns + k * period_ns;
    if (t > duration_ns) {
      break;
    }
    const long long dwell = t / dwell_ns;
    if (dwell > max_setting) {
      break;
    }
    const bool lost = rng::uniform01(cfg.seed, rng::Stream::Loss,
                                     static_cast<std::uint64_t>(k)) < cfg.receiver.loss_prob;
    const double f = cfg.rf_oscillator.f_at_min_setting_hz +
                     static_cast<double>(dwell) * cfg.rf_oscillator.delta_f_hz;
    if (!lost && std::abs(f - carrier) <= cfg.receiver.capture_halfwidth_hz) {
      ++counts[static_cast<std::size_t>(dwell)];
    }
  }

  int best_count = 0;
  for (int c : counts) {
    best_count = std::max(best_count, c);
  }
  if (best_count == 0) {
    return -1;
  }
  int lo = -1;
  int hi = -1;
  for (int s = 0; s <= max_setting; ++s) {
    if (counts[static_cast<std::size_t>(s)] == best_count) {
      if (lo < 0) {
        lo = s;
      }
      hi = s;
    }
  }
  int mid = static_cast<int>(std::llround((lo + hi) / 2.0));
  if (counts[static_cast<std::size_t>(mid)] != best_count) {
    for (int d = 1; d <= max_setting; ++d) {
      if (mid - d >= 0 && counts[static_cast<std::size_t>(mid - d)] == best_count) {
        mid -= d;
        break;
      }
      if (mid + d <= max_setting && counts[static_cast<std::size_t>(mid + d)] == best_count) {
        mid += d;
        break;
      }
    }
  }
  return mid;
}

void criterion_8() {
  const int instances = 50;
  int matches = 0;
  int first_mismatch = -1;
  for (int i = 0; i < instances; ++i) {
    const ScenarioConfig cfg = make_instance(i);
    const RunResult r = run_scenario(cfg);
    const int expected = oracle_best_setting(cfg);
    int got = -2;
    for (const TraceRecord& row : r.trace) {
      const double v = parse_after(row.event, "SWEEP_FINISH setting=");
      if (!std::isnan(v)) {
        got = static_cast<int>(v);
        break;
      }
    }
    if (got == expected) {
      ++matches;
    } else if (first_mismatch < 0) {
      first_mismatch = i;
    }
  }
  char detail[128];
  if (matches == instances) {
    std::snprintf(detail, sizeof(detail), "%d/%d instances match exactly", matches, instances);
  } else {
    std::snprintf(detail, sizeof(detail), "%d/%d instances match, first mismatch #%d",
                  matches, instances, first_mismatch);
  }
  report(8, matches == instances, "sweep oracle equivalence", detail);
}

// --------------------------------------------------------------------------
// 9. Determinism: identical config and seed give byte-identical traces.
// --------------------------------------------------------------------------
void criterion_9() {
  ScenarioConfig cfg = load("rf_tracking_ramp.json");
  cfg.seed = 42;
  const RunResult a = run_scenario(cfg);
  const RunResult b = run_scenario(cfg);
  const std::string csv_a = trace_to_csv(a.trace);
  bool ok = csv_a == trace_to_csv(b.trace);

  // Also via the parallel batch path.
  const std::vector<ScenarioConfig> cfgs(2, cfg);
  const auto batch = run_batch(cfgs, true);
  ok = ok && trace_to_csv(batch[0].trace) == csv_a && trace_to_csv(batch[1].trace) == csv_a;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%zu rows, %zu bytes per trace", a.trace.size(),
                csv_a.size());
  report(9, ok, "determinism", detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
  } else {
    std::printf("all criteria passed\n");
  }
  return g_failures;
}
