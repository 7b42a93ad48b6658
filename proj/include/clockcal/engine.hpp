#pragma once

#include <vector>

#include "clockcal/scenario.hpp"
#include "clockcal/trace.hpp"

namespace clockcal {

struct RunResult {
  std::vector<TraceRecord> trace;
  RunSummary summary;
  bool sweep_failed = false;  // sweep saturated before any reception; trace is partial
};

// Runs one scenario to completion. Deterministic for a given (config, seed):
// the event clock is integer nanoseconds and all randomness is counter-based,
// so the trace is byte-identical across repeats and thread counts.
RunResult run_scenario(const ScenarioConfig& cfg);

// Independent runs, optionally across threads. Each run owns its state and
// random streams, so results do not depend on scheduling.
std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& cfgs,
                                 bool parallel = true);

}  // namespace clockcal
