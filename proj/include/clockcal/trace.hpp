#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace clockcal {

/// One time-stamped row of simulation output. Rows are emitted at every
/// beacon instant and for calibration events that fall between beacons.
/// Beacon rows capture the state as the receiver saw it (before any setting
/// action decided at that instant); the event column describes the action.
/// Values are pre-rounded to the CSV precision so that a summary recomputed
/// from the CSV matches the emitted one exactly.
struct TraceRecord {
  double time_s = 0.0;   // 9 decimals (ns)
  double temp_c = 0.0;   // 4 decimals
  int rf_setting = 0;
  double rf_freq_hz = 0.0;  // 3 decimals
  double rf_ppm = 0.0;      // 3 decimals, vs rf nominal
  int chip_setting = 0;
  double chip_freq_hz = 0.0;
  double chip_ppm = 0.0;
  long long beacons_rx_total = 0;
  long long beacons_lost_total = 0;
  std::string event;  // empty, or '|'-joined "NAME key=value ..." entries
};

inline constexpr const char kTraceCsvHeader[] =
    "time_s,temp_c,rf_setting,rf_freq_hz,rf_ppm,chip_setting,chip_freq_hz,chip_ppm,"
    "beacons_rx_total,beacons_lost_total,event";

std::string trace_to_csv(std::span<const TraceRecord> trace);
void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace);
std::vector<TraceRecord> read_trace_csv(std::istream& in);
std::vector<TraceRecord> read_trace_csv_file(const std::string& path);

struct RunSummary {
  bool never_locked = true;
  double time_to_lock_s = -1.0;
  double post_lock_rf_ppm_max = 0.0;
  double post_lock_rf_ppm_2sigma = 0.0;
  double post_lock_chip_ppm_max = 0.0;
  double post_lock_chip_ppm_2sigma = 0.0;
  double fraction_samples_within_40ppm = 0.0;
  double fraction_within_window = 0.0;  // FINE holds / FINE decisions; 1 when none
  long long beacons_rx = 0;
  long long beacons_lost = 0;
};

// Post-lock statistics; lock is the first SWEEP_FINISH event. Throws
// std::invalid_argument on an empty trace. A trace without a lock event
// yields never_locked with zeroed statistics.
RunSummary summarize(std::span<const TraceRecord> trace);

std::string summary_to_json(const RunSummary& summary);

}  // namespace clockcal
