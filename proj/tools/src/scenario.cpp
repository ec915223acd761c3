#include "threebody_app/scenario.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace threebody::app {

using nlohmann::json;

namespace {

// Errors raised while turning a valid file into a runnable system.
struct SetupError {
  std::string code;
  std::string detail;
};

struct IntegrationError {
  std::string code;
  std::string detail;
};

std::vector<double> output_grid(const ScenarioConfig& c) {
  std::vector<double> out(static_cast<std::size_t>(c.samples) + 1);
  for (int i = 0; i <= c.samples; ++i) out[i] = c.t0 + (c.t1 - c.t0) * i / c.samples;
  out.back() = c.t1;
  return out;
}

std::vector<std::string> coordinate_names(Representation r) {
  switch (r) {
    case Representation::kR: return {"r12", "r23", "r31"};
    case Representation::kRho: return {"rho12", "rho23", "rho31"};
    case Representation::kGeo: return {"P", "S", "T"};
    case Representation::kVol: return {"P", "S"};
    case Representation::kVolM: return {"Pm", "Sm"};
    case Representation::kPOnly: return {"P"};
    case Representation::kPmOnly: return {"Pm"};
  }
  return {};
}

class CsvWriter {
 public:
  void header(const std::vector<std::string>& cols) { row_text(cols); }
  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row_text(cells);
  }
  void row_text(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }
  std::string str() const { return out_; }

 private:
  std::string out_;
};

json vec_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json check_json(const CheckConfig& c, double measured) {
  const bool pass = c.above ? measured > c.tol : measured < c.tol;
  return {{"name", c.name}, {"kind", c.kind}, {"measured", measured}, {"tol", c.tol},
          {"bound", c.above ? "above" : "below"}, {"pass", pass}};
}

json degeneracy_events(const std::vector<double>& t, const std::vector<DegeneracyClass>& cls) {
  json events = json::array();
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (i == 0 || cls[i] != cls[i - 1]) events.push_back({{"t", t[i]}, {"class", to_string(cls[i])}});
  }
  return events;
}

json stats_json(const IntegrationStats& s) {
  return {{"accepted", s.accepted}, {"rejected", s.rejected}, {"rhs_evals", s.rhs_evals},
          {"newton_iterations", s.newton_iterations}};
}

// Setup-time library errors become SetupError, integration-time ones IntegrationError.
template <class F>
auto setup(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw SetupError{std::string(to_string(e.code())), e.what()};
  } catch (const ConfigError& e) {
    throw SetupError{"ConfigError", e.what()};
  }
}

template <class F>
auto integrate_step(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw IntegrationError{std::string(to_string(e.code())), e.what()};
  }
}

MassTriple masses_of(const ScenarioConfig& c) {
  return setup([&] { return MassTriple(c.masses[0], c.masses[1], c.masses[2]); });
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void run_flow(const ScenarioConfig& c, ScenarioResult& res) {
  const MassTriple m = masses_of(c);
  HamiltonianSpec spec;
  PhaseState s0;
  setup([&] {
    spec = {representation_from_string(c.representation), m, build_potential(c.potential, m), c.p_omega};
    spec.validate();
    const Representation in = representation_from_string(c.initial.representation);
    const Eigen::VectorXd q = to_vec(c.initial.q);
    const Eigen::VectorXd p = c.initial.p.empty()
                                  ? momenta_from_velocities(in, q, to_vec(c.initial.q_dot), m)
                                  : to_vec(c.initial.p);
    s0 = {in, q, p};
    if (in != spec.rep) s0 = momentum_transform(spec.rep, s0, m);
    for (const auto& ch : c.checks) {
      if ((ch.kind == "closed_form" || ch.kind == "closed_form_energy")) {
        validate(build_closed_form(ch));
        if (ch.kind == "closed_form" && (spec.rep == Representation::kR || spec.rep == Representation::kRho)) {
          fail(ErrorCode::kRepresentationMismatch, "closed-form checks compare the P coordinate");
        }
      }
    }
    return 0;
  });

  TrajectoryOptions opt;
  opt.output_times = output_grid(c);
  opt.record_steps = false;
  opt.monitors = c.monitors;
  const Trajectory traj = integrate_step([&] { return integrate(spec, s0, c.t0, c.t1, c.integrator, opt); });

  const auto names = coordinate_names(spec.rep);
  const bool want_degeneracy =
      std::find(c.monitors.begin(), c.monitors.end(), "degeneracy") != c.monitors.end() &&
      !traj.degeneracy.empty();
  std::vector<std::string> cols{"t"};
  for (const auto& n : names) cols.push_back(n);
  for (const auto& n : names) cols.push_back("p_" + n);
  cols.push_back("energy");
  for (const auto& [name, series] : traj.monitors) cols.push_back(name);
  if (want_degeneracy) cols.push_back("degeneracy");
  CsvWriter csv;
  csv.header(cols);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<std::string> cells{format_double(traj.times[i])};
    for (Eigen::Index k = 0; k < traj.q[i].size(); ++k) cells.push_back(format_double(traj.q[i][k]));
    for (Eigen::Index k = 0; k < traj.p[i].size(); ++k) cells.push_back(format_double(traj.p[i][k]));
    cells.push_back(format_double(traj.energy[i]));
    for (const auto& [name, series] : traj.monitors) cells.push_back(format_double(series[i]));
    if (want_degeneracy) cells.push_back(to_string(traj.degeneracy[i]));
    csv.row_text(cells);
  }
  res.csv = csv.str();

  json& sum = res.summary;
  sum["final_state"] = {{"t", traj.times.back()}, {"representation", to_string(spec.rep)},
                        {"q", vec_json(traj.q.back())}, {"p", vec_json(traj.p.back())}};
  sum["max_energy_drift"] = traj.max_relative_energy_drift();
  json manifold = json::object();
  for (const auto& [name, series] : traj.monitors) manifold[name] = invariant_manifold_monitor(traj, name);
  sum["invariant_manifold"] = manifold;
  sum["degeneracy_events"] = degeneracy_events(traj.times, traj.degeneracy);
  sum["stats"] = stats_json(traj.stats);

  json checks = json::array();
  for (const auto& ch : c.checks) {
    double measured = 0.0;
    if (ch.kind == "energy_drift") {
      measured = traj.max_relative_energy_drift();
    } else if (ch.kind == "monitor") {
      measured = invariant_manifold_monitor(traj, ch.monitor);
    } else if (ch.kind == "closed_form") {
      const ClosedForm f = build_closed_form(ch);
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        measured = std::max(measured, std::abs(traj.q[i][0] - closed_form_value(f, traj.times[i])));
      }
    } else if (ch.kind == "closed_form_energy") {
      measured = std::abs(traj.energy.front() - closed_form_energy(build_closed_form(ch)));
    }
    checks.push_back(check_json(ch, measured));
  }
  sum["checks"] = checks;
}

struct OracleRun {
  std::string label;
  CartesianTrajectory traj;
  ReducedSeries reduced;
};

OracleRun run_oracle_dim(const ScenarioConfig& c, const MassTriple& m, const Potential& V, int d) {
  const RhoPoint rho0{c.initial.q[0], c.initial.q[1], c.initial.q[2]};
  const Eigen::Vector3d rate(c.initial.q_dot[0], c.initial.q_dot[1], c.initial.q_dot[2]);
  CartesianState s0 = setup([&] {
    CartesianState s = zero_L_initial(rho0, rate, m, d);
    if (d > 2) s = rotate(s, random_rotation(d, c.seed + static_cast<std::uint64_t>(d)));
    return s;
  });
  OracleRun run;
  run.label = "d" + std::to_string(d);
  run.traj = integrate_step(
      [&] { return integrate_cartesian(s0, V, m, c.t0, c.t1, c.integrator, output_grid(c)); });
  run.reduced = reduce_trajectory(run.traj, m, V);
  return run;
}

double energy_drift(const std::vector<double>& e) {
  const double scale = std::abs(e.front()) > 0.0 ? std::abs(e.front()) : 1.0;
  double worst = 0.0;
  for (double x : e) worst = std::max(worst, std::abs(x - e.front()) / scale);
  return worst;
}

double max_angular(const ReducedSeries& r) {
  double worst = 0.0;
  for (const auto& l : r.angular) {
    for (double x : l) worst = std::max(worst, std::abs(x));
  }
  return worst;
}

void run_oracle(const ScenarioConfig& c, ScenarioResult& res) {
  const MassTriple m = masses_of(c);
  const Potential V = setup([&] { return build_potential(c.potential, m); });
  const bool cross = c.kind == ScenarioKind::kCrossCheck;
  const std::vector<int> dims = cross ? c.dimensions : std::vector<int>{c.dimensions.front()};

  std::vector<OracleRun> runs;
  for (int d : dims) runs.push_back(run_oracle_dim(c, m, V, d));

  // Series of rho per run label; the cross check adds the reduced Rho flow.
  std::vector<std::pair<std::string, std::vector<RhoPoint>>> series;
  for (const auto& r : runs) series.emplace_back(r.label, r.reduced.rho);
  std::optional<Trajectory> flow;
  if (cross) {
    HamiltonianSpec spec;
    PhaseState s0;
    setup([&] {
      spec = {Representation::kRho, m, V, 0.0};
      spec.validate();
      const Eigen::VectorXd q = to_vec(c.initial.q);
      s0 = {Representation::kRho, q, momenta_from_velocities(Representation::kRho, q, to_vec(c.initial.q_dot), m)};
      return 0;
    });
    TrajectoryOptions opt;
    opt.output_times = output_grid(c);
    opt.record_steps = false;
    flow = integrate_step([&] { return integrate(spec, s0, c.t0, c.t1, c.integrator, opt); });
    std::vector<RhoPoint> rho;
    for (const auto& q : flow->q) rho.push_back({q[0], q[1], q[2]});
    series.emplace_back("rho_flow", rho);
  }

  const OracleRun& first = runs.front();
  std::vector<std::string> cols{"t"};
  for (const auto& [label, rho] : series) {
    for (const char* n : {"rho12", "rho23", "rho31"}) cols.push_back(cross ? std::string(n) + "_" + label : n);
  }
  if (!cross) {
    for (const char* n : {"P", "S", "T", "energy", "L_max"}) cols.push_back(n);
  }
  CsvWriter csv;
  csv.header(cols);
  const auto& times = first.reduced.times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (const auto& [label, rho] : series) {
      row.insert(row.end(), {rho[i].rho12, rho[i].rho23, rho[i].rho31});
    }
    if (!cross) {
      const GeoPoint& g = first.reduced.geo[i];
      double l = 0.0;
      for (double x : first.reduced.angular[i]) l = std::max(l, std::abs(x));
      row.insert(row.end(), {g.P, g.S, g.T, first.reduced.energy[i], l});
    }
    csv.row(row);
  }
  res.csv = csv.str();

  json& sum = res.summary;
  const RhoPoint& last = first.reduced.rho.back();
  sum["final_state"] = {{"t", times.back()}, {"representation", "Rho"}, {"q", {last.rho12, last.rho23, last.rho31}}};
  double drift = 0.0, l_max = 0.0;
  json per_run = json::object();
  for (const auto& r : runs) {
    drift = std::max(drift, energy_drift(r.reduced.energy));
    l_max = std::max(l_max, max_angular(r.reduced));
    per_run[r.label] = {{"max_energy_drift", energy_drift(r.reduced.energy)},
                        {"max_angular_momentum", max_angular(r.reduced)},
                        {"stats", stats_json(r.traj.stats)}};
  }
  if (flow) {
    drift = std::max(drift, flow->max_relative_energy_drift());
    per_run["rho_flow"] = {{"max_energy_drift", flow->max_relative_energy_drift()},
                           {"stats", stats_json(flow->stats)}};
  }
  sum["runs"] = per_run;
  sum["max_energy_drift"] = drift;
  sum["max_angular_momentum"] = l_max;
  sum["invariant_manifold"] = json::object();
  std::vector<DegeneracyClass> cls;
  for (const auto& g : first.reduced.geo) cls.push_back(classify_degeneracy(g));
  sum["degeneracy_events"] = degeneracy_events(times, cls);

  double pair_max = 0.0;
  if (cross) {
    json pairs = json::object();
    for (std::size_t a = 0; a < series.size(); ++a) {
      for (std::size_t b = a + 1; b < series.size(); ++b) {
        double dev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
          const auto x = series[a].second[i].as_array(), y = series[b].second[i].as_array();
          for (int k = 0; k < 3; ++k) dev = std::max(dev, std::abs(x[k] - y[k]));
        }
        pairs[series[a].first + "_vs_" + series[b].first] = dev;
        pair_max = std::max(pair_max, dev);
      }
    }
    sum["pair_deviation"] = pairs;
  }

  json checks = json::array();
  for (const auto& ch : c.checks) {
    double measured = 0.0;
    if (ch.kind == "energy_drift") measured = drift;
    if (ch.kind == "angular_momentum") measured = l_max;
    if (ch.kind == "pair_deviation") measured = pair_max;
    checks.push_back(check_json(ch, measured));
  }
  sum["checks"] = checks;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const std::filesystem::path& target, const std::string& contents) {
  namespace fs = std::filesystem;
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  ScenarioResult res;
  res.summary = {{"name", config.name}, {"kind", to_string(config.kind)}};
  try {
    if (config.kind == ScenarioKind::kFlow) {
      run_flow(config, res);
    } else {
      run_oracle(config, res);
    }
    bool all = true;
    for (const auto& ch : res.summary["checks"]) all = all && ch["pass"].get<bool>();
    res.exit_code = all ? kExitOk : kExitCheckFailed;
    res.summary["status"] = all ? "ok" : "check_failed";
  } catch (const SetupError& e) {
    res.csv.clear();
    res.exit_code = kExitConfigError;
    res.summary["status"] = "config_rejected";
    res.summary["error"] = {{"code", e.code}, {"detail", e.detail}};
  } catch (const IntegrationError& e) {
    res.csv.clear();
    res.exit_code = kExitIntegrationFailed;
    res.summary["status"] = "integration_failed";
    res.summary["error"] = {{"code", e.code}, {"detail", e.detail}};
  }
  res.summary["exit_code"] = res.exit_code;
  res.summary["config"] = serialize_config(config);
  return res;
}

std::filesystem::path resolve_out_dir(const ScenarioConfig& config,
                                      const std::optional<std::filesystem::path>& out_dir) {
  if (out_dir) return *out_dir;
  if (const char* env = std::getenv("THREEBODY_OUT_DIR"); env && *env) return env;
  if (!config.output.dir.empty()) return config.output.dir;
  return ".";
}

int run_scenario_file(const std::string& path, const RunOverrides& overrides) {
  ScenarioConfig config;
  try {
    config = load_config(path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (overrides.seed) config.seed = *overrides.seed;

  const ScenarioResult res = run_scenario(config);
  const std::filesystem::path dir = resolve_out_dir(config, overrides.out_dir);
  try {
    if (!res.csv.empty()) write_atomic(dir / config.output.csv, res.csv);
    write_atomic(dir / config.output.summary, res.summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitIntegrationFailed;
  }

  std::cout << config.name << ": " << res.summary["status"].get<std::string>();
  if (res.summary.contains("error")) {
    std::cout << " (" << res.summary["error"]["detail"].get<std::string>() << ")";
  }
  std::cout << '\n';
  for (const auto& ch : res.summary.value("checks", json::array())) {
    std::cout << "  " << (ch["pass"].get<bool>() ? "PASS " : "FAIL ") << ch["name"].get<std::string>()
              << " = " << format_double(ch["measured"].get<double>()) << '\n';
  }
  return res.exit_code;
}

}  // namespace threebody::app
