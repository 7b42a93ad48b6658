#include "clockcal/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "clockcal/kernels.hpp"

namespace clockcal {

namespace {

std::size_t count_occurrences(const std::string& s, const std::string& needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = s.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

std::string trace_to_csv(std::span<const TraceRecord> trace) {
  std::string out;
  out.reserve(trace.size() * 96 + 128);
  out += kTraceCsvHeader;
  out += '\n';
  char buf[256];
  for (const TraceRecord& r : trace) {
    std::snprintf(buf, sizeof(buf), "%.9f,%.4f,%d,%.3f,%.3f,%d,%.3f,%.3f,%lld,%lld,",
                  r.time_s, r.temp_c, r.rf_setting, r.rf_freq_hz, r.rf_ppm, r.chip_setting,
                  r.chip_freq_hz, r.chip_ppm, r.beacons_rx_total, r.beacons_lost_total);
    out += buf;
    out += r.event;
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open trace output file '" + path + "'");
  }
  out << trace_to_csv(trace);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::vector<TraceRecord> trace;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("trace CSV: empty input");
  }
  if (line != kTraceCsvHeader) {
    throw std::runtime_error("trace CSV: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 10; ++i) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        throw std::runtime_error("trace CSV: malformed row");
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    TraceRecord r;
    r.time_s = std::stod(fields[0]);
    r.temp_c = std::stod(fields[1]);
    r.rf_setting = std::stoi(fields[2]);
    r.rf_freq_hz = std::stod(fields[3]);
    r.rf_ppm = std::stod(fields[4]);
    r.chip_setting = std::stoi(fields[5]);
    r.chip_freq_hz = std::stod(fields[6]);
    r.chip_ppm = std::stod(fields[7]);
    r.beacons_rx_total = std::stoll(fields[8]);
    r.beacons_lost_total = std::stoll(fields[9]);
    r.event = line.substr(start);
    trace.push_back(std::move(r));
  }
  return trace;
}

std::vector<TraceRecord> read_trace_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open trace file '" + path + "'");
  }
  return read_trace_csv(in);
}

RunSummary summarize(std::span<const TraceRecord> trace) {
  if (trace.empty()) {
    throw std::invalid_argument("summarize: trace is empty");
  }
  RunSummary s;
  s.beacons_rx = trace.back().beacons_rx_total;
  s.beacons_lost = trace.back().beacons_lost_total;

  std::size_t lock_idx = trace.size();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].event.find("SWEEP_FINISH") != std::string::npos) {
      lock_idx = i;
      break;
    }
  }
  if (lock_idx == trace.size()) {
    return s;  // never locked
  }
  s.never_locked = false;
  s.time_to_lock_s = trace[lock_idx].time_s;

  std::vector<double> rf;
  std::vector<double> chip;
  rf.reserve(trace.size() - lock_idx);
  chip.reserve(trace.size() - lock_idx);
  std::size_t holds = 0;
  std::size_t steps = 0;
  for (std::size_t i = lock_idx; i < trace.size(); ++i) {
    rf.push_back(trace[i].rf_ppm);
    chip.push_back(trace[i].chip_ppm);
    holds += count_occurrences(trace[i].event, "FINE_HOLD");
    steps += count_occurrences(trace[i].event, "FINE_STEP");
  }
  const kernels::Moments mrf = kernels::moments(rf);
  const kernels::Moments mchip = kernels::moments(chip);
  s.post_lock_rf_ppm_max = mrf.max_abs;
  s.post_lock_rf_ppm_2sigma = 2.0 * mrf.stddev;
  s.post_lock_chip_ppm_max = mchip.max_abs;
  s.post_lock_chip_ppm_2sigma = 2.0 * mchip.stddev;
  s.fraction_samples_within_40ppm = kernels::fraction_within(rf, 40.0);
  s.fraction_within_window =
      (holds + steps) == 0 ? 1.0
                           : static_cast<double>(holds) / static_cast<double>(holds + steps);
  return s;
}

std::string summary_to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["never_locked"] = s.never_locked;
  j["time_to_lock_s"] = s.time_to_lock_s;
  j["post_lock_rf_ppm_max"] = s.post_lock_rf_ppm_max;
  j["post_lock_rf_ppm_2sigma"] = s.post_lock_rf_ppm_2sigma;
  j["post_lock_chip_ppm_max"] = s.post_lock_chip_ppm_max;
  j["post_lock_chip_ppm_2sigma"] = s.post_lock_chip_ppm_2sigma;
  j["fraction_samples_within_40ppm"] = s.fraction_samples_within_40ppm;
  j["fraction_within_window"] = s.fraction_within_window;
  j["beacons_rx"] = s.beacons_rx;
  j["beacons_lost"] = s.beacons_lost;
  return j.dump(2);
}

}  // namespace clockcal
