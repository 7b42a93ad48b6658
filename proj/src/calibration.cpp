#include "clockcal/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clockcal/oscillator.hpp"

namespace clockcal {

int pick_best_setting(const std::map<int, int>& per_setting_count) {
  int best_count = 0;
  for (const auto& [setting, count] : per_setting_count) {
    best_count = std::max(best_count, count);
  }
  int lo = -1;
  int hi = -1;
  for (const auto& [setting, count] : per_setting_count) {
    if (count == best_count) {
      if (lo < 0) {
        lo = setting;
      }
      hi = setting;
    }
  }
  const int mid = static_cast<int>(std::llround((lo + hi) / 2.0));
  // Non-contiguous maxima: fall back to the nearest member, lower on ties.
  int best = lo;
  long long best_dist = std::numeric_limits<long long>::max();
  for (const auto& [setting, count] : per_setting_count) {
    if (count != best_count) {
      continue;
    }
    const long long dist = std::llabs(static_cast<long long>(setting) - mid);
    if (dist < best_dist) {
      best_dist = dist;
      best = setting;
    }
  }
  return best;
}

SweepAction sweep_step(SweepState& state, int count_this_setting, double delta_f_hz) {
  if (state.phase == SweepPhase::Done) {
    throw std::logic_error("sweep_step: called after FINISH");
  }
  state.per_setting_count[state.current_setting] = count_this_setting;
  state.best_count = std::max(state.best_count, count_this_setting);
  if (count_this_setting > 0) {
    state.last_rx_setting = state.current_setting;
    state.phase = SweepPhase::InChannel;
  }
  if (state.phase == SweepPhase::InChannel &&
      state.silence_span_hz(delta_f_hz) > state.silence_threshold_hz) {
    state.phase = SweepPhase::Done;
    return {true, pick_best_setting(state.per_setting_count)};
  }
  if (state.current_setting >= state.max_setting) {
    if (state.phase == SweepPhase::BelowChannel) {
      throw SweepFailure("sweep saturated at max_setting before any reception");
    }
    // Ran out of settings after receiving: finish with the best seen so far.
    state.phase = SweepPhase::Done;
    return {true, pick_best_setting(state.per_setting_count)};
  }
  ++state.current_setting;
  return {false, -1};
}

double required_listen_duration(double t_b_s, double timekeeping_ppm) {
  if (!(t_b_s > 0.0)) {
    throw std::invalid_argument("required_listen_duration: t_b_s must be positive");
  }
  const double err = std::abs(timekeeping_ppm) * 1e-6;
  if (err >= 1.0) {
    throw std::invalid_argument("required_listen_duration: clock error >= 100%");
  }
  const double min_span = 2.0 * t_b_s / (1.0 - err);
  return std::ceil(min_span / t_b_s) * t_b_s;
}

void validate(const ChippingCalConfig& cfg) {
  if (cfg.n_window < 1) {
    throw std::invalid_argument("chipping cal: n_window must be >= 1");
  }
  if (!(cfg.window_ppm > 0.0)) {
    throw std::invalid_argument("chipping cal: window_ppm must be positive");
  }
  if (!(cfg.ticks_ideal > 0.0)) {
    throw std::invalid_argument("chipping cal: ticks_ideal must be positive");
  }
  if (!(cfg.delta_ticks_per_step > 0.0)) {
    throw std::invalid_argument("chipping cal: delta_ticks_per_step must be positive");
  }
}

int fast_calibrate(long long ticks_measured, const ChippingCalConfig& cfg) {
  if (!(cfg.delta_ticks_per_step > 0.0)) {
    throw std::invalid_argument("fast_calibrate: delta_ticks_per_step must be positive");
  }
  const double diff = static_cast<double>(ticks_measured) - cfg.ticks_ideal;
  return static_cast<int>(std::llround(-diff / cfg.delta_ticks_per_step));
}

FineDecision fine_calibrate(ChippingCalState& state, const ChippingCalConfig& cfg) {
  if (static_cast<int>(state.tick_history.size()) != cfg.n_window) {
    throw std::logic_error("fine_calibrate: tick history must hold exactly n_window entries");
  }
  double sum = 0.0;
  for (long long t : state.tick_history) {
    sum += static_cast<double>(t);
  }
  const double mean_ticks = sum / static_cast<double>(cfg.n_window);
  FineDecision decision;
  decision.mean_ppm = ppm_error(mean_ticks, cfg.ticks_ideal);
  if (std::abs(decision.mean_ppm) > cfg.window_ppm) {
    decision.step = decision.mean_ppm > 0.0 ? -1 : +1;
  }
  if (!cfg.sliding_window || decision.step != 0) {
    state.tick_history.clear();
  } else {
    state.tick_history.pop_front();
  }
  state.mode = CalMode::FineTracking;
  return decision;
}

int if_track(const ReceptionReport& report, const RfTrackConfig& cfg) {
  if (!report.crc_ok || !report.if_offset_hz.has_value()) {
    throw std::logic_error("if_track: requires a CRC-OK reception with a measured IF");
  }
  const double offset = *report.if_offset_hz;
  if (offset > cfg.deadband_hz) {
    return +1;  // LO runs low
  }
  if (offset < -cfg.deadband_hz) {
    return -1;
  }
  return 0;
}

}  // namespace clockcal
