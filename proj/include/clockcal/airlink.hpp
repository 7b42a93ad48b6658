#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace clockcal {

/// Crystal-based join proxy emitting beacons at a fixed nominal period,
/// stretched by the transmitter's own crystal error.
struct BeaconSource {
  double f_c_hz = 2.405e9;            // beacon channel center
  double period_s = 0.125;            // nominal beacon interval T_b
  double tx_ppm_error = 10.0;         // transmitter crystal error
  double channel_bandwidth_hz = 2e6;  // occupied bandwidth
  double phase_s = 0.0;               // time of the first beacon
};

void validate(const BeaconSource& src);

inline double carrier_hz(const BeaconSource& src) {
  return src.f_c_hz * (1.0 + src.tx_ppm_error * 1e-6);
}

inline double beacon_step_s(const BeaconSource& src) {
  return src.period_s * (1.0 + src.tx_ppm_error * 1e-6);
}

// Beacon instants in [phase_s, horizon_s).
std::vector<double> beacon_times(const BeaconSource& src, double horizon_s);

/// Receiver front end abstraction: a hard capture window around the carrier,
/// an independent per-beacon loss probability and forced loss intervals.
struct ReceiverModel {
  double capture_halfwidth_hz = 1e6;  // max |RF tuning error| that still demodulates
  double if_nominal_hz = 2.5e6;
  double loss_prob = 0.0;
  std::vector<std::pair<double, double>> loss_bursts;  // [start_s, end_s)
};

void validate(const ReceiverModel& rx);

/// Outcome of one beacon attempt. if_offset_hz and ticks_since_last_rx are
/// absent markers (nullopt), never stale values, when not measured.
struct ReceptionReport {
  bool crc_ok = false;
  std::optional<double> if_offset_hz;             // actual carrier - rx LO (low-side LO)
  std::optional<long long> ticks_since_last_rx;   // filled by the caller for consecutive pairs
  double rx_time_s = 0.0;
};

// loss_sample is drawn by the caller from uniform [0, 1). The measured IF
// exceeds nominal when the LO runs low, so if_offset_hz = carrier - rx LO.
ReceptionReport attempt_reception(double rx_rf_freq_hz, const BeaconSource& src,
                                  const ReceiverModel& rx, double t_s, double loss_sample);

// round(integral of freq_at over [from_s, to_s]) with midpoint sampling on a
// uniform grid of roughly sub_step_s. Throws std::domain_error when the
// interval is empty.
long long count_ticks(const std::function<double(double)>& freq_at, double from_s,
                      double to_s, double sub_step_s);

}  // namespace clockcal
