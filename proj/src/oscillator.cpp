#include "clockcal/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clockcal {

void validate(const TunableOscillator& osc) {
  if (!(osc.f_nominal_hz > 0.0)) {
    throw std::invalid_argument("oscillator: f_nominal_hz must be positive");
  }
  if (!(osc.delta_f_hz > 0.0)) {
    throw std::invalid_argument("oscillator: delta_f_hz must be positive");
  }
  if (osc.max_setting < 0) {
    throw std::invalid_argument("oscillator: max_setting must be non-negative");
  }
  if (osc.setting < 0 || osc.setting > osc.max_setting) {
    throw std::invalid_argument("oscillator: setting outside [0, max_setting]");
  }
  const double top = osc.f_at_min_setting_hz + osc.max_setting * osc.delta_f_hz;
  if (top < osc.f_nominal_hz * (1.0 + 1e-2)) {
    throw std::invalid_argument(
        "oscillator: tuning range top must reach f_nominal_hz * (1 + 1e-2)");
  }
  if (osc.noise_sigma_ppm < 0.0) {
    throw std::invalid_argument("oscillator: noise_sigma_ppm must be non-negative");
  }
  if (!(osc.noise_correlation_time_s > 0.0)) {
    throw std::invalid_argument("oscillator: noise_correlation_time_s must be positive");
  }
}

double synthesize_frequency(const TunableOscillator& osc, double temp_c, double noise_ppm) {
  if (osc.setting < 0 || osc.setting > osc.max_setting) {
    throw std::out_of_range("synthesize_frequency: setting outside [0, max_setting]");
  }
  const double drift_ppm = osc.tempco_ppm_per_c * (temp_c - osc.t_ref_c) + noise_ppm;
  return osc.base_frequency_hz() * (1.0 + drift_ppm * 1e-6);
}

double ppm_error(double f_hz, double f_ref_hz) {
  if (!(f_ref_hz > 0.0)) {
    throw std::domain_error("ppm_error: reference frequency must be positive");
  }
  return (f_hz - f_ref_hz) / f_ref_hz * 1e6;
}

StepOutcome step_setting(const TunableOscillator& osc, int delta) {
  StepOutcome out{osc, false};
  const long long target = static_cast<long long>(osc.setting) + delta;
  const long long clamped =
      std::clamp(target, 0LL, static_cast<long long>(osc.max_setting));
  out.osc.setting = static_cast<int>(clamped);
  out.saturated = clamped != target;
  return out;
}

}  // namespace clockcal
