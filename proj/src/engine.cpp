#include "clockcal/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "clockcal/calibration.hpp"
#include "clockcal/kernels.hpp"
#include "clockcal/rng.hpp"

namespace clockcal {

namespace {

constexpr long long kNsPerSec = 1'000'000'000LL;
constexpr int kLockLostMisses = 8;

// Rows closer than this merge into one record so timestamps stay strictly
// increasing at CSV precision.
constexpr long long kMergeWindowNs = 1000;

long long to_ns(double seconds) { return std::llround(seconds * 1e9); }
double to_s(long long ns) { return static_cast<double>(ns) * 1e-9; }

double round_dec(double x, double scale) {
  return static_cast<double>(std::llround(x * scale)) / scale;
}

// Frequency noise in ppm, piecewise-constant over fixed time cells. The cell
// grid is independent of the integration sub-step, so integrals converge
// under sub-step refinement and samples one beacon apart are fresh draws.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, rng::Stream stream, const TunableOscillator& osc,
              long long cell_ns)
      : seed_(seed),
        stream_(stream),
        sigma_(osc.noise_sigma_ppm),
        model_(osc.noise_model),
        cell_ns_(cell_ns) {
    if (model_ == NoiseModel::RandomWalk) {
      const double cell_s = to_s(cell_ns);
      rho_ = std::exp(-cell_s / osc.noise_correlation_time_s);
      innovation_ = sigma_ * std::sqrt(1.0 - rho_ * rho_);
    }
  }

  double at(long long t_ns) {
    if (sigma_ == 0.0) {
      return 0.0;
    }
    const long long cell = t_ns / cell_ns_;
    if (model_ == NoiseModel::White) {
      return sigma_ * rng::normal(seed_, stream_, static_cast<std::uint64_t>(cell));
    }
    // Mean-reverting AR(1), iterated forward cell by cell. Queries are
    // monotone during a run; a backwards query restarts from cell 0.
    if (cell < last_cell_) {
      last_cell_ = -1;
    }
    if (last_cell_ < 0) {
      value_ = sigma_ * rng::normal(seed_, stream_, 0);
      last_cell_ = 0;
    }
    while (last_cell_ < cell) {
      ++last_cell_;
      value_ = rho_ * value_ +
               innovation_ * rng::normal(seed_, stream_, static_cast<std::uint64_t>(last_cell_));
    }
    return value_;
  }

 private:
  std::uint64_t seed_;
  rng::Stream stream_;
  double sigma_;
  NoiseModel model_;
  long long cell_ns_;
  double rho_ = 0.0;
  double innovation_ = 0.0;
  long long last_cell_ = -1;
  double value_ = 0.0;
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        rf_(cfg.rf_oscillator),
        chip_(cfg.chipping_oscillator),
        cell_ns_(std::max(1LL, to_ns(cfg.noise_update_interval_s))),
        rf_noise_(cfg.seed, rng::Stream::NoiseRf, cfg.rf_oscillator, cell_ns_),
        chip_noise_(cfg.seed, rng::Stream::NoiseChip, cfg.chipping_oscillator, cell_ns_) {
    chip_cfg_.n_window = cfg.calibrator.N;
    chip_cfg_.window_ppm = cfg.calibrator.window_ppm;
    chip_cfg_.ticks_ideal = cfg.chipping_oscillator.f_nominal_hz * cfg.beacon.period_s;
    chip_cfg_.delta_ticks_per_step =
        cfg.chipping_oscillator.delta_f_hz * cfg.beacon.period_s;
    chip_cfg_.sliding_window = cfg.calibrator.fine_sliding_window;
    chip_cfg_.per_beacon = cfg.calibrator.fine_per_beacon;
    validate(chip_cfg_);
    track_.deadband_hz = cfg.calibrator.deadband_hz;
  }

  RunResult run() {
    const long long duration_ns = to_ns(cfg_.duration_s);
    const long long period_ns = std::max(1LL, to_ns(beacon_step_s(cfg_.beacon)));
    const long long phase_ns = to_ns(cfg_.beacon.phase_s);

    if (cfg_.calibrator.sweep_enabled) {
      sweeping_ = true;
      sweep_.current_setting = rf_.setting;
      sweep_.max_setting = rf_.max_setting;
      sweep_.listen_duration_s = cfg_.calibrator.t_L;
      dwell_end_ns_ = dwell_len_ns(0);
      queue_event(0, "SWEEP_START", phase_ns <= duration_ns ? phase_ns : -1);
    } else {
      tracking_ = true;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "SWEEP_FINISH setting=%d dwells=0 max_count=0",
                    rf_.setting);
      queue_event(0, buf, phase_ns <= duration_ns ? phase_ns : -1);
    }

    for (long long k = 0;; ++k) {
      const long long t = phase_ns + k * period_ns;
      if (t > duration_ns) {
        break;
      }
      while (sweeping_ && dwell_end_ns_ <= t) {
        close_dwell(t);
        if (sweep_failed_) {
          break;
        }
      }
      if (sweep_failed_) {
        break;
      }
      advance_phase(t);

      const double jit = jitter_at(t);
      const double temp = temperature_at(cfg_.temperature, to_s(t), jit);
      const double rf_f = synthesize_frequency(rf_, temp, rf_noise_.at(t));
      const double chip_f = synthesize_frequency(chip_, temp, chip_noise_.at(t));
      const int rf_set = rf_.setting;
      const int chip_set = chip_.setting;

      const double loss_u =
          rng::uniform01(cfg_.seed, rng::Stream::Loss, static_cast<std::uint64_t>(k));
      ReceptionReport rep =
          attempt_reception(rf_f, cfg_.beacon, cfg_.receiver, to_s(t), loss_u);
      if (rep.crc_ok) {
        ++rx_total_;
        if (last_rx_beacon_ == k - 1) {
          rep.ticks_since_last_rx = std::llround(phi_ - phi_at_last_rx_);
        }
      } else {
        ++lost_total_;
      }

      std::string events;
      if (sweeping_) {
        if (rep.crc_ok) {
          ++dwell_count_;
        }
      } else if (tracking_) {
        react_tracking(rep, events);
      }
      if (rep.crc_ok) {
        last_rx_beacon_ = k;
        phi_at_last_rx_ = phi_;
      }
      emit_row(t, temp, rf_set, rf_f, chip_set, chip_f, events);
    }
    flush_pending(duration_ns);

    RunResult result;
    result.trace = std::move(trace_);
    result.summary = summarize(result.trace);
    result.sweep_failed = sweep_failed_;
    return result;
  }

 private:
  double jitter_at(long long t_ns) {
    const double stability = cfg_.temperature.stability_c;
    if (stability == 0.0) {
      return 0.0;
    }
    const std::uint64_t cell = static_cast<std::uint64_t>(t_ns / cell_ns_);
    return stability * (2.0 * rng::uniform01(cfg_.seed, rng::Stream::Jitter, cell) - 1.0);
  }

  // The device times its dwell with its own (mis-calibrated) chipping clock:
  // a nominal t_L lasts t_L * f_nominal / f_actual of true time, with the
  // rate sampled at dwell start.
  long long dwell_len_ns(long long t_ns) {
    const double temp = temperature_at(cfg_.temperature, to_s(t_ns), jitter_at(t_ns));
    const double f = synthesize_frequency(chip_, temp, chip_noise_.at(t_ns));
    const double dwell_s = cfg_.calibrator.t_L * (chip_.f_nominal_hz / f);
    return std::max(1LL, to_ns(dwell_s));
  }

  // Accumulates chipping-clock phase (ticks) with midpoint sampling on a
  // uniform grid of roughly sub_step_s; one rounding per beacon interval
  // happens where the consumer differences the accumulator.
  void advance_phase(long long to_ns_target) {
    if (to_ns_target <= prev_ns_) {
      prev_ns_ = to_ns_target;
      return;
    }
    const long long span_ns = to_ns_target - prev_ns_;
    const double span_s = to_s(span_ns);
    const long long n = std::max(1LL, std::llround(span_s / cfg_.sub_step_s));
    const double dt = span_s / static_cast<double>(n);
    buf_.resize(static_cast<std::size_t>(n));
    const double dt_ns = dt * 1e9;
    for (long long i = 0; i < n; ++i) {
      const long long mid_ns =
          prev_ns_ + std::llround((static_cast<double>(i) + 0.5) * dt_ns);
      const double t_mid = to_s(mid_ns);
      const double temp = temperature_at(cfg_.temperature, t_mid, jitter_at(mid_ns));
      buf_[static_cast<std::size_t>(i)] =
          synthesize_frequency(chip_, temp, chip_noise_.at(mid_ns));
    }
    phi_ += kernels::block_sum(buf_) * dt;
    prev_ns_ = to_ns_target;
  }

  void close_dwell(long long next_beacon_ns) {
    SweepAction action;
    try {
      action = sweep_step(sweep_, dwell_count_, rf_.delta_f_hz);
    } catch (const SweepFailure&) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "SWEEP_FAIL setting=%d", sweep_.current_setting);
      emit_event_record(dwell_end_ns_, buf);
      sweep_failed_ = true;
      sweeping_ = false;
      return;
    }
    dwell_count_ = 0;
    ++dwells_done_;
    if (action.finished) {
      rf_.setting = action.final_setting;
      sweeping_ = false;
      tracking_ = true;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "SWEEP_FINISH setting=%d dwells=%d max_count=%d",
                    action.final_setting, dwells_done_, sweep_.best_count);
      queue_event(dwell_end_ns_, buf, next_beacon_ns);
    } else {
      rf_.setting = sweep_.current_setting;
      dwell_end_ns_ += dwell_len_ns(dwell_end_ns_);
    }
  }

  void react_tracking(const ReceptionReport& rep, std::string& events) {
    if (!rep.crc_ok) {
      if (++misses_ == kLockLostMisses) {
        append_event(events, "LOCK_LOST misses=8");
      }
      return;
    }
    misses_ = 0;
    if (cfg_.calibrator.if_track_enabled) {
      const int dir = if_track(rep, track_);
      if (dir != 0) {
        const StepOutcome so = step_setting(rf_, dir);
        rf_ = so.osc;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "IF_STEP dir=%+d if_offset_hz=%.3f%s", dir,
                      *rep.if_offset_hz, so.saturated ? " sat=1" : "");
        append_event(events, buf);
      }
    }
    if (cfg_.calibrator.chip_cal_enabled && rep.ticks_since_last_rx.has_value()) {
      const long long ticks = *rep.ticks_since_last_rx;
      char buf[96];
      if (chip_state_.mode == CalMode::Uncalibrated) {
        const int corr = fast_calibrate(ticks, chip_cfg_);
        const StepOutcome so = step_setting(chip_, corr);
        chip_ = so.osc;
        chip_state_.mode = CalMode::FastDone;
        std::snprintf(buf, sizeof(buf), "FAST_CAL delta=%+d ticks=%lld%s", corr, ticks,
                      so.saturated ? " sat=1" : "");
        append_event(events, buf);
      } else if (chip_cfg_.per_beacon) {
        const double ppm = ppm_error(static_cast<double>(ticks), chip_cfg_.ticks_ideal);
        int step = 0;
        if (std::abs(ppm) > chip_cfg_.window_ppm) {
          step = ppm > 0.0 ? -1 : +1;
        }
        apply_fine(step, ppm, events);
      } else {
        chip_state_.tick_history.push_back(ticks);
        if (static_cast<int>(chip_state_.tick_history.size()) == chip_cfg_.n_window) {
          const FineDecision d = fine_calibrate(chip_state_, chip_cfg_);
          apply_fine(d.step, d.mean_ppm, events);
        }
      }
    }
  }

  void apply_fine(int step, double mean_ppm, std::string& events) {
    char buf[96];
    if (step != 0) {
      const StepOutcome so = step_setting(chip_, step);
      chip_ = so.osc;
      std::snprintf(buf, sizeof(buf), "FINE_STEP dir=%+d mean_ppm=%.3f%s", step, mean_ppm,
                    so.saturated ? " sat=1" : "");
    } else {
      std::snprintf(buf, sizeof(buf), "FINE_HOLD mean_ppm=%.3f", mean_ppm);
    }
    append_event(events, buf);
  }

  static void append_event(std::string& events, const std::string& e) {
    if (!events.empty()) {
      events += '|';
    }
    events += e;
  }

  // Events between beacons get their own record unless they land within the
  // merge window of the next beacon instant.
  void queue_event(long long t_ns, const std::string& event, long long next_beacon_ns) {
    if (next_beacon_ns >= 0 && next_beacon_ns - t_ns < kMergeWindowNs) {
      append_event(pending_, event);
      return;
    }
    emit_event_record(t_ns, event);
  }

  void emit_event_record(long long t_ns, const std::string& event) {
    const double jit = jitter_at(t_ns);
    const double temp = temperature_at(cfg_.temperature, to_s(t_ns), jit);
    const double rf_f = synthesize_frequency(rf_, temp, rf_noise_.at(t_ns));
    const double chip_f = synthesize_frequency(chip_, temp, chip_noise_.at(t_ns));
    emit_row(t_ns, temp, rf_.setting, rf_f, chip_.setting, chip_f, event);
  }

  void emit_row(long long t_ns, double temp, int rf_set, double rf_f, int chip_set,
                double chip_f, const std::string& events) {
    TraceRecord r;
    r.time_s = to_s(t_ns);
    r.temp_c = round_dec(temp, 1e4);
    r.rf_setting = rf_set;
    r.rf_freq_hz = round_dec(rf_f, 1e3);
    r.rf_ppm = round_dec(ppm_error(rf_f, cfg_.rf_oscillator.f_nominal_hz), 1e3);
    r.chip_setting = chip_set;
    r.chip_freq_hz = round_dec(chip_f, 1e3);
    r.chip_ppm = round_dec(ppm_error(chip_f, cfg_.chipping_oscillator.f_nominal_hz), 1e3);
    r.beacons_rx_total = rx_total_;
    r.beacons_lost_total = lost_total_;
    if (!pending_.empty()) {
      std::string merged = pending_;
      pending_.clear();
      if (!events.empty()) {
        append_event(merged, events);
      }
      r.event = merged;
    } else {
      r.event = events;
    }
    trace_.push_back(std::move(r));
  }

  void flush_pending(long long duration_ns) {
    if (!pending_.empty()) {
      const std::string event = pending_;
      pending_.clear();
      emit_event_record(duration_ns, event);
    }
  }

  ScenarioConfig cfg_;
  TunableOscillator rf_;
  TunableOscillator chip_;
  long long cell_ns_;
  NoiseSource rf_noise_;
  NoiseSource chip_noise_;

  ChippingCalConfig chip_cfg_;
  ChippingCalState chip_state_;
  RfTrackConfig track_;
  SweepState sweep_;

  bool sweeping_ = false;
  bool tracking_ = false;
  bool sweep_failed_ = false;
  long long dwell_end_ns_ = 0;
  int dwell_count_ = 0;
  int dwells_done_ = 0;
  int misses_ = 0;

  long long prev_ns_ = 0;
  double phi_ = 0.0;  // accumulated chipping ticks
  long long last_rx_beacon_ = -2;
  double phi_at_last_rx_ = 0.0;
  long long rx_total_ = 0;
  long long lost_total_ = 0;

  std::vector<double> buf_;
  std::string pending_;
  std::vector<TraceRecord> trace_;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  Simulation sim(cfg);
  return sim.run();
}

std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& cfgs, bool parallel) {
  for (const ScenarioConfig& cfg : cfgs) {
    validate(cfg);
  }
  std::vector<RunResult> out(cfgs.size());
  std::string first_error;
  const std::int64_t n = static_cast<std::int64_t>(cfgs.size());
#ifdef CLOCKCAL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel && n > 1)
#else
  (void)parallel;
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      Simulation sim(cfgs[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(i)] = sim.run();
    } catch (const std::exception& e) {
#ifdef CLOCKCAL_HAVE_OPENMP
#pragma omp critical
#endif
      {
        if (first_error.empty()) {
          first_error = e.what();
        }
      }
    }
  }
  if (!first_error.empty()) {
    throw std::runtime_error(first_error);
  }
  return out;
}

}  // namespace clockcal
