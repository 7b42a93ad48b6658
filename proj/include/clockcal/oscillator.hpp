#pragma once

#include <stdexcept>

namespace clockcal {

enum class NoiseModel {
  White,       // independent sample per noise cell
  RandomWalk,  // mean-reverting AR(1) with stationary sigma = noise_sigma_ppm
};

/// Setting-indexed on-chip frequency source. The synthesized frequency is a
/// linear setting map perturbed by a linear temperature coefficient and a
/// caller-supplied noise sample:
///
///   f = (f_at_min + setting * delta_f) *
///       (1 + (tempco * (temp - t_ref) + noise_ppm) * 1e-6)
struct TunableOscillator {
  double f_nominal_hz = 0.0;         // target frequency
  double f_at_min_setting_hz = 0.0;  // frequency at setting 0 at t_ref
  double delta_f_hz = 0.0;           // tuning resolution per setting step
  int setting = 0;
  int max_setting = 0;
  double tempco_ppm_per_c = 0.0;
  double t_ref_c = 25.0;
  double noise_sigma_ppm = 0.0;
  NoiseModel noise_model = NoiseModel::White;
  double noise_correlation_time_s = 600.0;  // RandomWalk only

  double base_frequency_hz() const { return f_at_min_setting_hz + setting * delta_f_hz; }
};

// Throws std::invalid_argument when a field violates its contract. The tuning
// range must reach at least +10000 ppm above nominal so cold-start offsets
// stay reachable by the sweep.
void validate(const TunableOscillator& osc);

// Pure. Throws std::out_of_range when the setting is outside [0, max_setting].
double synthesize_frequency(const TunableOscillator& osc, double temp_c, double noise_ppm);

// (f - f_ref) / f_ref * 1e6. Throws std::domain_error when f_ref <= 0.
double ppm_error(double f_hz, double f_ref_hz);

struct StepOutcome {
  TunableOscillator osc;
  bool saturated = false;  // set when the step clamped at 0 or max_setting
};

StepOutcome step_setting(const TunableOscillator& osc, int delta);

}  // namespace clockcal
