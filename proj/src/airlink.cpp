#include "clockcal/airlink.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clockcal/kernels.hpp"

namespace clockcal {

void validate(const BeaconSource& src) {
  if (!(src.period_s > 0.0)) {
    throw std::invalid_argument("beacon: period_s must be positive");
  }
  if (std::abs(src.tx_ppm_error) > 40.0) {
    throw std::invalid_argument("beacon: |tx_ppm_error| must be <= 40 (compliant source)");
  }
  if (!(src.f_c_hz > 0.0) || !(src.channel_bandwidth_hz > 0.0)) {
    throw std::invalid_argument("beacon: frequencies must be positive");
  }
  if (src.phase_s < 0.0) {
    throw std::invalid_argument("beacon: phase_s must be non-negative");
  }
}

std::vector<double> beacon_times(const BeaconSource& src, double horizon_s) {
  if (!(horizon_s > 0.0)) {
    throw std::invalid_argument("beacon_times: horizon_s must be positive");
  }
  std::vector<double> out;
  const double step = beacon_step_s(src);
  for (long long k = 0;; ++k) {
    const double t = src.phase_s + static_cast<double>(k) * step;
    if (t >= horizon_s) {
      break;
    }
    out.push_back(t);
  }
  return out;
}

void validate(const ReceiverModel& rx) {
  if (!(rx.capture_halfwidth_hz > 0.0)) {
    throw std::invalid_argument("receiver: capture_halfwidth_hz must be positive");
  }
  if (rx.loss_prob < 0.0 || rx.loss_prob > 1.0) {
    throw std::invalid_argument("receiver: loss_prob must be in [0, 1]");
  }
  for (const auto& [start, end] : rx.loss_bursts) {
    if (!(end > start)) {
      throw std::invalid_argument("receiver: loss burst must have end > start");
    }
  }
}

ReceptionReport attempt_reception(double rx_rf_freq_hz, const BeaconSource& src,
                                  const ReceiverModel& rx, double t_s, double loss_sample) {
  ReceptionReport rep;
  rep.rx_time_s = t_s;
  const double carrier = carrier_hz(src);
  bool in_burst = false;
  for (const auto& [start, end] : rx.loss_bursts) {
    if (t_s >= start && t_s < end) {
      in_burst = true;
      break;
    }
  }
  rep.crc_ok = std::abs(rx_rf_freq_hz - carrier) <= rx.capture_halfwidth_hz &&
               loss_sample >= rx.loss_prob && !in_burst;
  if (rep.crc_ok) {
    rep.if_offset_hz = carrier - rx_rf_freq_hz;
  }
  return rep;
}

long long count_ticks(const std::function<double(double)>& freq_at, double from_s,
                      double to_s, double sub_step_s) {
  if (!(to_s > from_s)) {
    throw std::domain_error("count_ticks: empty interval");
  }
  if (!(sub_step_s > 0.0)) {
    throw std::invalid_argument("count_ticks: sub_step_s must be positive");
  }
  const double span = to_s - from_s;
  const long long n = std::max(1LL, std::llround(span / sub_step_s));
  const double dt = span / static_cast<double>(n);
  std::vector<double> f(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    f[static_cast<std::size_t>(i)] = freq_at(from_s + (static_cast<double>(i) + 0.5) * dt);
  }
  return std::llround(kernels::block_sum(f) * dt);
}

}  // namespace clockcal
