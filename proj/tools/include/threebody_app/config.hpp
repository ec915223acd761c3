#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "threebody/threebody.hpp"

namespace threebody::app {

// Any problem reading or validating a scenario file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PotentialConfig {
  // newton, log2d, harmonic_chain, lemniscate, anharmonic_ps, power_scale, volume_mass
  std::string type = "anharmonic_ps";
  std::map<std::string, double> params;
  std::shared_ptr<PotentialConfig> inner;  // volume_mass only

  friend bool operator==(const PotentialConfig& a, const PotentialConfig& b);
};

enum class ScenarioKind { kFlow, kOracle, kCrossCheck };

const char* to_string(ScenarioKind k);

struct InitialConfig {
  std::string representation = "Rho";
  std::vector<double> q;
  std::vector<double> p;      // canonical momenta, or
  std::vector<double> q_dot;  // velocities (exactly one of the two)

  friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct CheckConfig {
  std::string name;
  // closed_form, closed_form_energy, energy_drift, monitor, angular_momentum, pair_deviation
  std::string kind;
  double tol = 0.0;
  bool above = false;  // pass when measured > tol instead of < tol
  std::string monitor;
  std::string form;  // harmonic | anharmonic, for the closed-form checks
  std::map<std::string, double> params;

  friend bool operator==(const CheckConfig&, const CheckConfig&) = default;
};

struct OutputConfig {
  std::string dir;  // empty: current directory
  std::string csv;
  std::string summary;

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
  std::string name;
  ScenarioKind kind = ScenarioKind::kFlow;
  std::string representation = "Rho";  // flow runs
  std::array<double, 3> masses{1.0, 1.0, 1.0};
  PotentialConfig potential;
  double p_omega = 0.0;
  InitialConfig initial;
  std::vector<int> dimensions{2};  // oracle runs
  double t0 = 0.0;
  double t1 = 1.0;
  int samples = 100;
  IntegratorSpec integrator;
  std::vector<std::string> monitors;
  std::vector<CheckConfig> checks;
  std::uint64_t seed = 1;
  OutputConfig output;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);
nlohmann::json serialize_config(const ScenarioConfig& c);

Potential build_potential(const PotentialConfig& p, const MassTriple& m);
ClosedForm build_closed_form(const CheckConfig& c);

}  // namespace threebody::app
