#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "threebody_app/config.hpp"

namespace threebody::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitIntegrationFailed = 3,
};

// A fully rendered run: CSV text plus the JSON summary.
struct ScenarioResult {
  int exit_code = kExitOk;
  std::string csv;
  nlohmann::json summary;
};

struct RunOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
};

// Runs the scenario in memory; never throws for library or integration errors.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Output directory precedence: override, THREEBODY_OUT_DIR, config, cwd.
std::filesystem::path resolve_out_dir(const ScenarioConfig& config,
                                      const std::optional<std::filesystem::path>& out_dir);

// Loads, runs and writes artifacts; returns the process exit code.
int run_scenario_file(const std::string& path, const RunOverrides& overrides);

// %.17g
std::string format_double(double x);

// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const std::filesystem::path& target, const std::string& contents);

}  // namespace threebody::app
