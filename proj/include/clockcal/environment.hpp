#pragma once

#include <utility>
#include <vector>

namespace clockcal {

enum class ProfileKind { Constant, Ramp, Piecewise };

/// Temperature as a function of simulation time, including chamber
/// imperfections: a systematic set-point error applied multiplicatively and a
/// per-query jitter supplied by the caller.
struct TemperatureProfile {
  ProfileKind kind = ProfileKind::Constant;
  double base_temp_c = 25.0;
  double ramp_rate_c_per_min = 0.0;
  double ramp_span_c = 0.0;           // ramp clamps at base + span
  double stability_c = 0.0;           // half-width of chamber jitter
  double set_error_fraction = 0.0;
  std::vector<std::pair<double, double>> segments;  // (time_s, temp_c), Piecewise only
};

void validate(const TemperatureProfile& profile);

// Profile value before imperfections. Piecewise profiles interpolate linearly
// between breakpoints and hold the last value afterwards; querying before the
// first breakpoint throws std::domain_error.
double deterministic_temperature(const TemperatureProfile& profile, double t_s);

// deterministic * (1 + set_error_fraction) + jitter_c. The jitter sample is
// drawn by the caller from uniform [-stability_c, +stability_c].
double temperature_at(const TemperatureProfile& profile, double t_s, double jitter_c);

}  // namespace clockcal
