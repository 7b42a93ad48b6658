#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "clockcal/airlink.hpp"
#include "clockcal/environment.hpp"
#include "clockcal/oscillator.hpp"

namespace clockcal {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CalibratorParams {
  double t_L = 1.0;            // sweep dwell, seconds
  int N = 10;                  // beacons per fine window
  double window_ppm = 400.0;
  double deadband_hz = -1.0;   // < 0: resolved to rf delta_f / 2 at load time
  bool sweep_enabled = true;
  bool if_track_enabled = true;
  bool chip_cal_enabled = true;
  bool fine_sliding_window = false;
  bool fine_per_beacon = false;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  double duration_s = 60.0;
  double sub_step_s = 0.0125;                // tick-integration resolution
  double noise_update_interval_s = 0.0125;   // noise/jitter refresh cell width
  std::string output;                        // trace CSV path; empty = none
  TunableOscillator rf_oscillator;
  TunableOscillator chipping_oscillator;
  TemperatureProfile temperature;
  BeaconSource beacon;
  ReceiverModel receiver;
  CalibratorParams calibrator;
};

TunableOscillator default_rf_oscillator();
TunableOscillator default_chipping_oscillator();
ScenarioConfig default_scenario();

// Strict parse: unknown keys anywhere in the document raise ConfigError.
// Absent keys fall back to the defaults above. Resolves the deadband default
// and validates every sub-config.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);

void validate(const ScenarioConfig& cfg);

}  // namespace clockcal
