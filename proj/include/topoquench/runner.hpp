#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoquench/config.hpp"

namespace topoquench {

using Json = nlohmann::ordered_json;

/// Exit-code contract of the batch front end.
enum ExitCode : int {
  kOk = 0,
  kError = 1,
  kSymmetryViolation = 2,
  kInadmissibleGrid = 3,
};

struct RunResult {
  int exit_code = kOk;
  Json summary;          // RunSummary on success, empty otherwise
  std::string error;     // diagnostic on failure
  double wall_seconds = 0.0;
};

/// Executes one scenario: writes <output.dir>/series.csv and
/// <output.dir>/summary.json on success, removes partial outputs on
/// failure.
RunResult run(const RunConfig& cfg);

struct SweepEntry {
  double value = 0.0;
  RunResult result;
};

/// Runs the scenario once per axis value (axis "grid" sets the grid sizes,
/// axis "dt" sets the step). Per-run failures are recorded and the sweep
/// continues. Writes <output.dir>/sweep.json.
std::vector<SweepEntry> sweep(const RunConfig& cfg, const std::string& axis,
                              const std::vector<double>& values);

}  // namespace topoquench
