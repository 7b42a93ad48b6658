// Command-line front end: run a scenario, sweep a parameter across values,
// or recompute summary statistics from a trace CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clockcal/engine.hpp"
#include "clockcal/scenario.hpp"

namespace {

using clockcal::ConfigError;
using clockcal::RunResult;
using clockcal::ScenarioConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitNeverLocked = 3;

json load_raw_json(const std::string& path) {
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
  return j;
}

// Sets a dotted path like "calibrator.deadband_hz" in a JSON document.
// Unknown paths surface later through the strict scenario parser.
void set_dotted(json& j, const std::string& path, double value) {
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) {
      throw ConfigError("sweep: empty key in --param path");
    }
    if (dot == std::string::npos) {
      if (value == static_cast<double>(static_cast<long long>(value))) {
        (*node)[key] = static_cast<long long>(value);
      } else {
        (*node)[key] = value;
      }
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

int run_command(const std::string& scenario_path, bool has_seed, std::uint64_t seed,
                const std::string& out_path, double duration_override) {
  ScenarioConfig cfg = clockcal::load_scenario(scenario_path);
  if (has_seed) {
    cfg.seed = seed;
  }
  if (duration_override > 0.0) {
    cfg.duration_s = duration_override;
  }
  if (!out_path.empty()) {
    cfg.output = out_path;
  }
  clockcal::validate(cfg);
  const RunResult result = clockcal::run_scenario(cfg);
  if (!cfg.output.empty()) {
    clockcal::write_trace_csv(cfg.output, result.trace);
  }
  std::cout << clockcal::summary_to_json(result.summary) << "\n";
  if (result.sweep_failed || result.summary.never_locked) {
    return kExitNeverLocked;
  }
  return kExitOk;
}

int sweep_command(const std::string& scenario_path, const std::string& param,
                  const std::vector<double>& values, int seeds, const std::string& out_dir,
                  bool serial) {
  const json base = load_raw_json(scenario_path);
  std::vector<ScenarioConfig> cfgs;
  std::vector<std::pair<double, std::uint64_t>> labels;
  for (double value : values) {
    json patched = base;
    set_dotted(patched, param, value);
    ScenarioConfig cfg = clockcal::scenario_from_json(patched);
    for (int s = 0; s < seeds; ++s) {
      ScenarioConfig run_cfg = cfg;
      run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(s);
      cfgs.push_back(run_cfg);
      labels.emplace_back(value, run_cfg.seed);
    }
  }
  const std::vector<RunResult> results = clockcal::run_batch(cfgs, !serial);

  std::printf("%-14s %-8s %-7s %-14s %-14s %-14s %-10s %-10s\n", param.c_str(), "seed",
              "locked", "time_to_lock", "rf_ppm_2sig", "chip_ppm_2sig", "frac_40", "frac_win");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& s = results[i].summary;
    std::printf("%-14g %-8llu %-7s %-14.3f %-14.3f %-14.3f %-10.4f %-10.4f\n",
                labels[i].first, static_cast<unsigned long long>(labels[i].second),
                s.never_locked ? "no" : "yes", s.time_to_lock_s, s.post_lock_rf_ppm_2sigma,
                s.post_lock_chip_ppm_2sigma, s.fraction_samples_within_40ppm,
                s.fraction_within_window);
    if (!out_dir.empty()) {
      char name[256];
      std::snprintf(name, sizeof(name), "%s/sweep_%s=%g_seed%llu.csv", out_dir.c_str(),
                    param.c_str(), labels[i].first,
                    static_cast<unsigned long long>(labels[i].second));
      clockcal::write_trace_csv(name, results[i].trace);
    }
  }
  return kExitOk;
}

int summarize_command(const std::string& csv_path) {
  const std::vector<clockcal::TraceRecord> trace = clockcal::read_trace_csv_file(csv_path);
  const clockcal::RunSummary summary = clockcal::summarize(trace);
  std::cout << clockcal::summary_to_json(summary) << "\n";
  return summary.never_locked ? kExitNeverLocked : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clockcal: crystal-free radio clock-calibration simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::uint64_t seed = 0;
  double duration = -1.0;

  CLI::App* run = app.add_subcommand("run", "run one scenario and print its summary");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_path, "trace CSV output path (overrides config)");
  run->add_option("--duration", duration, "override duration_s");

  std::string param;
  std::vector<double> values;
  int seeds = 1;
  std::string out_dir;
  bool serial = false;
  CLI::App* sweep = app.add_subcommand("sweep", "parameter study over one scenario");
  sweep->add_option("scenario", scenario_path, "scenario JSON file")->required();
  sweep->add_option("--param", param, "dotted config path, e.g. calibrator.deadband_hz")
      ->required();
  sweep->add_option("--values", values, "values to substitute")->required()->expected(-1);
  sweep->add_option("--seeds", seeds, "seeds per value (base seed from the scenario)");
  sweep->add_option("--out-dir", out_dir, "write one trace CSV per run into this directory");
  sweep->add_flag("--serial", serial, "disable parallel execution of the runs");

  std::string csv_path;
  CLI::App* summ = app.add_subcommand("summarize", "recompute the summary from a trace CSV");
  summ->add_option("trace", csv_path, "trace CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (run->parsed()) {
      return run_command(scenario_path, seed_opt->count() > 0, seed, out_path, duration);
    }
    if (sweep->parsed()) {
      return sweep_command(scenario_path, param, values, seeds, out_dir, serial);
    }
    return summarize_command(csv_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
