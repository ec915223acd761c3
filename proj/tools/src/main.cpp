#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "threebody_app/acceptance.hpp"
#include "threebody_app/scenario.hpp"

namespace app = threebody::app;

namespace {

int verify(const std::string& filter, std::uint64_t seed, const std::optional<std::filesystem::path>& out) {
  const auto results = app::run_acceptance(filter, seed);
  if (results.empty()) {
    std::cerr << "no criterion matches '" << filter << "'\n";
    return app::kExitConfigError;
  }
  app::print_table(std::cout, results);

  // The report is written only when an output directory was asked for.
  std::optional<std::filesystem::path> dir = out;
  if (!dir) {
    if (const char* env = std::getenv("THREEBODY_OUT_DIR"); env && *env) dir = env;
  }
  if (dir) {
    try {
      app::write_atomic(*dir / "verify.json", app::to_json(results).dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "output error: " << e.what() << '\n';
      return app::kExitIntegrationFailed;
    }
  }
  for (const auto& r : results) {
    if (!r.pass()) return app::kExitCheckFailed;
  }
  return app::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Zero angular momentum three-body simulator"};
  cli.require_subcommand(1);
  cli.fallthrough();

  std::string out_dir;
  std::uint64_t seed = 20240601;
  auto* out_opt = cli.add_option("--out", out_dir, "output directory (overrides THREEBODY_OUT_DIR)");
  auto* seed_opt = cli.add_option("--seed", seed, "seed for randomized scenarios and criteria");

  std::string config_path;
  auto* run = cli.add_subcommand("run", "integrate one scenario file");
  run->add_option("config", config_path, "scenario file (JSON)")->required();

  std::string filter;
  auto* ver = cli.add_subcommand("verify", "run the acceptance criteria");
  ver->add_option("--filter", filter, "criterion number, name or name substring");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::kExitConfigError;
  }

  std::optional<std::filesystem::path> out;
  if (*out_opt) out = out_dir;

  if (*run) {
    app::RunOverrides o;
    o.out_dir = out;
    if (*seed_opt) o.seed = seed;
    return app::run_scenario_file(config_path, o);
  }
  return verify(filter, seed, out);
}
