#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "threebody_app/acceptance.hpp"
#include "threebody_app/config.hpp"
#include "threebody_app/scenario.hpp"

using namespace threebody;
using namespace threebody::app;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = THREEBODY_SCENARIO_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("threebody_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Config, ShippedScenariosRoundTrip) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(kScenarios)) {
    if (e.path().extension() != ".json") continue;
    const ScenarioConfig c = load_config(e.path().string());
    EXPECT_EQ(parse_config(serialize_config(c)), c) << e.path();
    EXPECT_EQ(parse_config_text(serialize_config(c).dump()), c) << e.path();
    ++n;
  }
  EXPECT_GE(n, 6);
}

TEST(Config, EveryFieldRoundTrips) {
  ScenarioConfig c;
  c.name = "full";
  c.kind = ScenarioKind::kFlow;
  c.representation = "VolM";
  c.masses = {1.0, 2.0, 3.0};
  c.potential.type = "volume_mass";
  c.potential.inner = std::make_shared<PotentialConfig>();
  c.potential.inner->type = "power_scale";
  c.potential.inner->params = {{"coeff", -0.1}, {"exponent", 1.0 / 3.0}};
  c.initial = {"VolM", {2.0, 0.1}, {}, {0.01, 0.002}};
  c.t0 = 0.1;
  c.t1 = 0.7;
  c.samples = 17;
  c.integrator.method = IntegratorMethod::kImplicitMidpoint;
  c.integrator.step = 1.0 / 7.0;
  c.monitors = {"P_S"};
  CheckConfig ch;
  ch.name = "cf";
  ch.kind = "closed_form";
  ch.form = "anharmonic";
  ch.params = {{"A", 1.0}, {"B", 0.1}, {"k", 0.3}, {"sign", -1.0}};
  ch.tol = 1e-3;
  ch.above = true;
  c.checks = {ch};
  c.seed = 123456789012345ULL;
  c.output = {"out/dir", "a.csv", "b.json"};
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  EXPECT_EQ(parse_config_text(serialize_config(c).dump(1)), c);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config_text("{not json"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"name":"x","t_span":[0,1]})"), ConfigError);
  const std::string base = R"({"name":"x","t_span":[0,1],"initial":{"q":[1,1.2,1.4],"p":[0,0,0]})";
  EXPECT_NO_THROW(parse_config_text(base + "}"));
  EXPECT_THROW(parse_config_text(base + R"(,"typo":1})"), ConfigError);
  EXPECT_THROW(parse_config_text(base + R"(,"t_span":[1,0]})"), ConfigError);
  EXPECT_THROW(parse_config_text(base + R"(,"masses":[1,0,1]})"), ConfigError);
  EXPECT_THROW(parse_config_text(base + R"(,"potential":{"type":"newton","G":1}})"), ConfigError);
  EXPECT_THROW(parse_config_text(base + R"(,"representation":"Cartesian"})"), ConfigError);
  EXPECT_THROW(parse_config_text(base + R"(,"integrator":{"method":"Euler"}})"), ConfigError);
  EXPECT_THROW(parse_config_text(base + R"(,"checks":[{"kind":"monitor","tol":1,"monitor":"P_T"}]})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"name":"x","t_span":[0,1],"initial":{"q":[1,1.2],"p":[0,0,0]}})"), ConfigError);
}

TEST(Scenario, HarmonicMatchesClosedForm) {
  const ScenarioResult r = run_scenario(load_config((kScenarios / "harmonic_p_only.json").string()));
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto& checks = r.summary["checks"];
  ASSERT_EQ(checks[0]["name"], "closed_form_max_err");
  EXPECT_LT(checks[0]["measured"].get<double>(), 1e-8);
  EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')), "t,P,p_P,energy");
  EXPECT_EQ(r.csv.find('\r'), std::string::npos);
  // 501 samples plus the header.
  EXPECT_EQ(std::count(r.csv.begin(), r.csv.end(), '\n'), 502);
}

TEST(Scenario, CsvIsDeterministic) {
  const ScenarioConfig c = load_config((kScenarios / "invariant_manifold_geo.json").string());
  const ScenarioResult a = run_scenario(c), b = run_scenario(c);
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_EQ(a.summary.dump(), b.summary.dump());
  EXPECT_EQ(a.csv.substr(0, a.csv.find('\n')), "t,P,S,T,p_P,p_S,p_T,energy,P_T,degeneracy");
}

TEST(Scenario, FormatUsesSeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-1.0 / 3.0 * 1e-300), "-3.3333333333333334e-301");
}

TEST(Scenario, HugeStepIsIntegrationFailure) {
  const ScenarioResult r = run_scenario(load_config((kScenarios / "huge_step.json").string()));
  EXPECT_EQ(r.exit_code, kExitIntegrationFailed);
  EXPECT_EQ(r.summary["error"]["code"], "StepFailure");
  EXPECT_TRUE(r.csv.empty());
}

TEST(Scenario, CrossRepresentationPairs) {
  const ScenarioResult r = run_scenario(load_config((kScenarios / "cross_representation.json").string()));
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto& pairs = r.summary["pair_deviation"];
  ASSERT_EQ(pairs.size(), 3u);
  for (const auto& [name, dev] : pairs.items()) EXPECT_LT(dev.get<double>(), 1e-6) << name;
}

TEST(Scenario, FailedCheckExitsOne) {
  ScenarioConfig c = load_config((kScenarios / "harmonic_p_only.json").string());
  c.checks[0].tol = 1e-20;
  EXPECT_EQ(run_scenario(c).exit_code, kExitCheckFailed);
}

TEST(Scenario, InfeasibleSetupIsConfigError) {
  ScenarioConfig c = load_config((kScenarios / "invariant_manifold_geo.json").string());
  c.representation = "Rho";  // isosceles-free, but this Geo state is pushed through a sorted preimage
  c.initial.q = {1.5, 3.0 / 16.0, 2.0};  // no triangle has these invariants
  EXPECT_EQ(run_scenario(c).exit_code, kExitConfigError);
}

TEST(Scenario, FilesAreWrittenAtomically) {
  const fs::path dir = scratch("atomic");
  write_atomic(dir / "sub" / "a.txt", "first\n");
  write_atomic(dir / "sub" / "a.txt", "second\n");
  EXPECT_EQ(slurp(dir / "sub" / "a.txt"), "second\n");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++files;
  EXPECT_EQ(files, 1);
  fs::remove_all(dir);
}

TEST(Scenario, OutputDirectoryPrecedence) {
  ScenarioConfig c;
  c.output.dir = "from_config";
  ::unsetenv("THREEBODY_OUT_DIR");
  EXPECT_EQ(resolve_out_dir(c, std::nullopt), fs::path("from_config"));
  ::setenv("THREEBODY_OUT_DIR", "from_env", 1);
  EXPECT_EQ(resolve_out_dir(c, std::nullopt), fs::path("from_env"));
  EXPECT_EQ(resolve_out_dir(c, fs::path("from_flag")), fs::path("from_flag"));
  ::unsetenv("THREEBODY_OUT_DIR");
  c.output.dir.clear();
  EXPECT_EQ(resolve_out_dir(c, std::nullopt), fs::path("."));
}

TEST(Scenario, RunFileWritesArtifacts) {
  const fs::path dir = scratch("run");
  RunOverrides o;
  o.out_dir = dir;
  EXPECT_EQ(run_scenario_file((kScenarios / "oracle_gravity_d3.json").string(), o), kExitOk);
  EXPECT_TRUE(fs::exists(dir / "oracle_gravity_d3.csv"));
  const auto summary = nlohmann::json::parse(slurp(dir / "oracle_gravity_d3.summary.json"));
  EXPECT_EQ(summary["status"], "ok");
  EXPECT_TRUE(summary.contains("degeneracy_events"));
  EXPECT_TRUE(summary.contains("final_state"));
  const std::string first = slurp(dir / "oracle_gravity_d3.csv");
  o.seed = 99;  // a different rotation of the 3-d embedding
  EXPECT_EQ(run_scenario_file((kScenarios / "oracle_gravity_d3.json").string(), o), kExitOk);
  EXPECT_NE(slurp(dir / "oracle_gravity_d3.csv"), first);
  EXPECT_EQ(run_scenario_file((dir / "missing.json").string(), o), kExitConfigError);
  fs::remove_all(dir);
}

TEST(Verify, FilterSelectsSubset) {
  EXPECT_EQ(run_acceptance("harmonic_closed_form", 1).size(), 1u);
  EXPECT_EQ(run_acceptance("8", 1).size(), 1u);
  EXPECT_EQ(run_acceptance("closed_form", 1).size(), 2u);
  EXPECT_TRUE(run_acceptance("no_such_criterion", 1).empty());
}
