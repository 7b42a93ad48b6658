#include "clockcal/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace clockcal {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError("config: " + where + " must be an object");
  }
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("config: unknown key '" + where + key + "'");
    }
  }
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
  }
}

std::vector<std::pair<double, double>> pair_list(const json& j, const char* key,
                                                 const std::string& where) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : j.at(key)) {
    if (!item.is_array() || item.size() != 2) {
      throw ConfigError("config: " + where + key + " entries must be [a, b] pairs");
    }
    out.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return out;
}

NoiseModel noise_model_from_string(const std::string& s) {
  if (s == "white") {
    return NoiseModel::White;
  }
  if (s == "random_walk") {
    return NoiseModel::RandomWalk;
  }
  throw ConfigError("config: noise_model must be 'white' or 'random_walk'");
}

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "constant") {
    return ProfileKind::Constant;
  }
  if (s == "ramp") {
    return ProfileKind::Ramp;
  }
  if (s == "piecewise") {
    return ProfileKind::Piecewise;
  }
  throw ConfigError("config: temperature kind must be constant, ramp or piecewise");
}

TunableOscillator oscillator_from_json(const json& j, const TunableOscillator& defaults,
                                       const std::string& where) {
  check_keys(j, where,
             {"f_nominal_hz", "f_at_min_setting_hz", "delta_f_hz", "setting", "max_setting",
              "tempco_ppm_per_c", "t_ref_c", "noise_sigma_ppm", "noise_model",
              "noise_correlation_time_s"});
  TunableOscillator osc = defaults;
  get_if(j, "f_nominal_hz", osc.f_nominal_hz);
  get_if(j, "f_at_min_setting_hz", osc.f_at_min_setting_hz);
  get_if(j, "delta_f_hz", osc.delta_f_hz);
  get_if(j, "setting", osc.setting);
  get_if(j, "max_setting", osc.max_setting);
  get_if(j, "tempco_ppm_per_c", osc.tempco_ppm_per_c);
  get_if(j, "t_ref_c", osc.t_ref_c);
  get_if(j, "noise_sigma_ppm", osc.noise_sigma_ppm);
  get_if(j, "noise_correlation_time_s", osc.noise_correlation_time_s);
  if (j.contains("noise_model")) {
    osc.noise_model = noise_model_from_string(j.at("noise_model").get<std::string>());
  }
  return osc;
}

}  // namespace

TunableOscillator default_rf_oscillator() {
  TunableOscillator osc;
  osc.f_nominal_hz = 2.405e9;
  osc.f_at_min_setting_hz = 2.405e9 * (1.0 - 0.012);  // range spans +/- 12000 ppm
  osc.delta_f_hz = 90e3;
  osc.setting = 0;
  osc.max_setting = 642;
  osc.tempco_ppm_per_c = -48.64;
  osc.t_ref_c = 25.0;
  osc.noise_sigma_ppm = 17.05;
  return osc;
}

TunableOscillator default_chipping_oscillator() {
  TunableOscillator osc;
  osc.f_nominal_hz = 2e6;
  osc.f_at_min_setting_hz = 2e6 * (1.0 - 0.012);
  osc.delta_f_hz = 800.0;
  osc.setting = 30;  // nominal
  osc.max_setting = 60;
  osc.tempco_ppm_per_c = 355.0;
  osc.t_ref_c = 25.0;
  osc.noise_sigma_ppm = 139.25;
  return osc;
}

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.rf_oscillator = default_rf_oscillator();
  cfg.chipping_oscillator = default_chipping_oscillator();
  cfg.calibrator.deadband_hz = cfg.rf_oscillator.delta_f_hz / 2.0;
  return cfg;
}

ScenarioConfig scenario_from_json(const json& j) {
  check_keys(j, "",
             {"seed", "duration_s", "sub_step_s", "noise_update_interval_s", "output",
              "rf_oscillator", "chipping_oscillator", "temperature", "beacon", "receiver",
              "calibrator"});
  ScenarioConfig cfg = default_scenario();
  cfg.calibrator.deadband_hz = -1.0;  // re-resolved against the parsed rf delta_f
  get_if(j, "seed", cfg.seed);
  get_if(j, "duration_s", cfg.duration_s);
  get_if(j, "sub_step_s", cfg.sub_step_s);
  get_if(j, "noise_update_interval_s", cfg.noise_update_interval_s);
  get_if(j, "output", cfg.output);

  if (j.contains("rf_oscillator")) {
    cfg.rf_oscillator =
        oscillator_from_json(j.at("rf_oscillator"), cfg.rf_oscillator, "rf_oscillator.");
  }
  if (j.contains("chipping_oscillator")) {
    cfg.chipping_oscillator = oscillator_from_json(j.at("chipping_oscillator"),
                                                   cfg.chipping_oscillator,
                                                   "chipping_oscillator.");
  }
  if (j.contains("temperature")) {
    const json& t = j.at("temperature");
    check_keys(t, "temperature.",
               {"kind", "base_temp_c", "ramp_rate_c_per_min", "ramp_span_c", "stability_c",
                "set_error_fraction", "segments"});
    if (t.contains("kind")) {
      cfg.temperature.kind = profile_kind_from_string(t.at("kind").get<std::string>());
    }
    get_if(t, "base_temp_c", cfg.temperature.base_temp_c);
    get_if(t, "ramp_rate_c_per_min", cfg.temperature.ramp_rate_c_per_min);
    get_if(t, "ramp_span_c", cfg.temperature.ramp_span_c);
    get_if(t, "stability_c", cfg.temperature.stability_c);
    get_if(t, "set_error_fraction", cfg.temperature.set_error_fraction);
    if (t.contains("segments")) {
      cfg.temperature.segments = pair_list(t, "segments", "temperature.");
    }
  }
  if (j.contains("beacon")) {
    const json& b = j.at("beacon");
    check_keys(b, "beacon.",
               {"f_c_hz", "period_s", "tx_ppm_error", "channel_bandwidth_hz", "phase_s"});
    get_if(b, "f_c_hz", cfg.beacon.f_c_hz);
    get_if(b, "period_s", cfg.beacon.period_s);
    get_if(b, "tx_ppm_error", cfg.beacon.tx_ppm_error);
    get_if(b, "channel_bandwidth_hz", cfg.beacon.channel_bandwidth_hz);
    get_if(b, "phase_s", cfg.beacon.phase_s);
  }
  if (j.contains("receiver")) {
    const json& r = j.at("receiver");
    check_keys(r, "receiver.",
               {"capture_halfwidth_hz", "if_nominal_hz", "loss_prob", "loss_bursts"});
    get_if(r, "capture_halfwidth_hz", cfg.receiver.capture_halfwidth_hz);
    get_if(r, "if_nominal_hz", cfg.receiver.if_nominal_hz);
    get_if(r, "loss_prob", cfg.receiver.loss_prob);
    if (r.contains("loss_bursts")) {
      cfg.receiver.loss_bursts = pair_list(r, "loss_bursts", "receiver.");
    }
  }
  if (j.contains("calibrator")) {
    const json& c = j.at("calibrator");
    check_keys(c, "calibrator.",
               {"t_L", "N", "window_ppm", "deadband_hz", "sweep_enabled", "if_track_enabled",
                "chip_cal_enabled", "fine_sliding_window", "fine_per_beacon"});
    get_if(c, "t_L", cfg.calibrator.t_L);
    get_if(c, "N", cfg.calibrator.N);
    get_if(c, "window_ppm", cfg.calibrator.window_ppm);
    get_if(c, "deadband_hz", cfg.calibrator.deadband_hz);
    get_if(c, "sweep_enabled", cfg.calibrator.sweep_enabled);
    get_if(c, "if_track_enabled", cfg.calibrator.if_track_enabled);
    get_if(c, "chip_cal_enabled", cfg.calibrator.chip_cal_enabled);
    get_if(c, "fine_sliding_window", cfg.calibrator.fine_sliding_window);
    get_if(c, "fine_per_beacon", cfg.calibrator.fine_per_beacon);
  }

  if (cfg.calibrator.deadband_hz < 0.0) {
    cfg.calibrator.deadband_hz = cfg.rf_oscillator.delta_f_hz / 2.0;
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open scenario file '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: JSON parse error in '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

void validate(const ScenarioConfig& cfg) {
  try {
    validate(cfg.rf_oscillator);
    validate(cfg.chipping_oscillator);
    validate(cfg.temperature);
    validate(cfg.beacon);
    validate(cfg.receiver);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.duration_s > 0.0)) {
    throw ConfigError("config: duration_s must be positive");
  }
  if (!(cfg.sub_step_s > 0.0) || cfg.sub_step_s > cfg.beacon.period_s / 10.0) {
    throw ConfigError("config: sub_step_s must be in (0, period_s / 10]");
  }
  if (!(cfg.noise_update_interval_s > 0.0)) {
    throw ConfigError("config: noise_update_interval_s must be positive");
  }
  if (!(cfg.calibrator.t_L > 0.0)) {
    throw ConfigError("config: calibrator.t_L must be positive");
  }
  if (cfg.calibrator.N < 1) {
    throw ConfigError("config: calibrator.N must be >= 1");
  }
  if (!(cfg.calibrator.window_ppm > 0.0)) {
    throw ConfigError("config: calibrator.window_ppm must be positive");
  }
  if (cfg.calibrator.deadband_hz < 0.0 ||
      cfg.calibrator.deadband_hz >= cfg.rf_oscillator.delta_f_hz) {
    throw ConfigError("config: deadband_hz must be in [0, rf delta_f_hz)");
  }
}

}  // namespace clockcal
