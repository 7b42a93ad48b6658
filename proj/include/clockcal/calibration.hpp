#pragma once

#include <deque>
#include <map>
#include <stdexcept>

#include "clockcal/airlink.hpp"

namespace clockcal {

// ---------------------------------------------------------------------------
// Cold-start beacon channel sweep
// ---------------------------------------------------------------------------

struct SweepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SweepPhase { BelowChannel, InChannel, Done };

/// Bookkeeping for the cold-start sweep: the device dwells on each setting
/// for the listen duration, counts CRC-OK beacons, and stops once it has
/// scanned more than the silence threshold past the last receiving setting.
struct SweepState {
  int current_setting = 0;
  int max_setting = 0;
  double listen_duration_s = 1.0;
  double silence_threshold_hz = 1e6;
  std::map<int, int> per_setting_count;
  int last_rx_setting = -1;  // highest setting that received anything; -1 = none
  int best_count = 0;
  SweepPhase phase = SweepPhase::BelowChannel;

  double silence_span_hz(double delta_f_hz) const {
    if (last_rx_setting < 0) {
      return 0.0;
    }
    return (current_setting - last_rx_setting) * delta_f_hz;
  }
};

struct SweepAction {
  bool finished = false;
  int final_setting = -1;
};

// One call per completed dwell with that dwell's CRC-OK count. Advances the
// setting on ADVANCE; on FINISH returns the argmax-count setting with ties
// broken by the midpoint rule. Throws SweepFailure when the sweep saturates
// at max_setting before any beacon was received.
SweepAction sweep_step(SweepState& state, int count_this_setting, double delta_f_hz);

// Tie rule applied at FINISH: the arithmetic midpoint of the maximal-count
// settings, rounded half away from zero; when that setting is not itself in
// the group (non-contiguous maxima), the nearest member wins, lower on ties.
int pick_best_setting(const std::map<int, int>& per_setting_count);

// Smallest dwell, as a whole number of beacon periods, whose true span still
// covers two beacon periods when the local timekeeping clock is wrong by
// +/- timekeeping_ppm.
double required_listen_duration(double t_b_s, double timekeeping_ppm);

// ---------------------------------------------------------------------------
// Chipping-clock calibration
// ---------------------------------------------------------------------------

enum class CalMode { Uncalibrated, FastDone, FineTracking };

struct ChippingCalConfig {
  int n_window = 10;                    // beacons per fine-calibration window
  double window_ppm = 400.0;            // calibration window half-width
  double ticks_ideal = 250000.0;        // ideal ticks per beacon interval
  double delta_ticks_per_step = 100.0;  // tick change per setting step per interval
  bool sliding_window = false;          // slide on HOLD, clear on STEP
  bool per_beacon = false;              // decide from every single interval
};

void validate(const ChippingCalConfig& cfg);

struct ChippingCalState {
  std::deque<long long> tick_history;
  CalMode mode = CalMode::Uncalibrated;
};

// One-shot correction from a single consecutive-beacon tick count:
//   round(-(ticks_measured - ticks_ideal) / delta_ticks_per_step)
// Throws std::invalid_argument when delta_ticks_per_step is not positive.
int fast_calibrate(long long ticks_measured, const ChippingCalConfig& cfg);

struct FineDecision {
  int step = 0;  // -1, 0 (hold) or +1
  double mean_ppm = 0.0;
};

// Windowed fine correction. Requires a full window of n_window entries
// (throws std::logic_error otherwise). Steps against the sign of the mean
// error when it falls outside the window. Non-overlapping mode clears the
// history after every decision; sliding mode drops the oldest entry on HOLD
// and clears on STEP so a step is never followed by decisions on stale data.
FineDecision fine_calibrate(ChippingCalState& state, const ChippingCalConfig& cfg);

// ---------------------------------------------------------------------------
// IF-feedback RF tracking
// ---------------------------------------------------------------------------

struct RfTrackConfig {
  double deadband_hz = 45000.0;  // |IF offset| below which no correction fires
};

// Returns the setting step (-1, 0, +1) for one CRC-OK reception. Under the
// low-side LO convention a positive IF offset means the LO runs low, so the
// setting steps up. Throws std::logic_error when called on a lost beacon.
int if_track(const ReceptionReport& report, const RfTrackConfig& cfg);

}  // namespace clockcal
