#include "clockcal/environment.hpp"

#include <algorithm>
#include <stdexcept>

namespace clockcal {

void validate(const TemperatureProfile& profile) {
  if (profile.stability_c < 0.0) {
    throw std::invalid_argument("temperature: stability_c must be non-negative");
  }
  if (profile.ramp_rate_c_per_min < 0.0) {
    throw std::invalid_argument("temperature: ramp_rate_c_per_min must be non-negative");
  }
  if (profile.kind == ProfileKind::Piecewise) {
    if (profile.segments.empty()) {
      throw std::invalid_argument("temperature: piecewise profile needs breakpoints");
    }
    for (std::size_t i = 1; i < profile.segments.size(); ++i) {
      if (!(profile.segments[i].first > profile.segments[i - 1].first)) {
        throw std::invalid_argument(
            "temperature: piecewise breakpoints must be strictly increasing in time");
      }
    }
  }
}

double deterministic_temperature(const TemperatureProfile& profile, double t_s) {
  switch (profile.kind) {
    case ProfileKind::Constant:
      return profile.base_temp_c;
    case ProfileKind::Ramp: {
      const double rise = profile.ramp_rate_c_per_min / 60.0 * t_s;
      return profile.base_temp_c + std::min(rise, profile.ramp_span_c);
    }
    case ProfileKind::Piecewise: {
      const auto& seg = profile.segments;
      if (t_s < seg.front().first) {
        throw std::domain_error("temperature: query before first piecewise breakpoint");
      }
      if (t_s >= seg.back().first) {
        return seg.back().second;
      }
      auto it = std::upper_bound(
          seg.begin(), seg.end(), t_s,
          [](double t, const std::pair<double, double>& p) { return t < p.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (t_s - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  return profile.base_temp_c;
}

double temperature_at(const TemperatureProfile& profile, double t_s, double jitter_c) {
  return deterministic_temperature(profile, t_s) * (1.0 + profile.set_error_fraction) +
         jitter_c;
}

}  // namespace clockcal
