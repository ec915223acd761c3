#include "threebody_app/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace threebody::app {

using nlohmann::json;

namespace {

// Parameter names and defaults per potential type.
const std::map<std::string, std::map<std::string, double>>& potential_params() {
  static const std::map<std::string, std::map<std::string, double>> table = {
      {"newton", {{"gamma", 1.0}}},
      {"log2d", {{"gamma", 1.0}}},
      {"harmonic_chain", {{"omega", 1.0}, {"nu12", 1.0}, {"nu13", 1.0}, {"nu23", 1.0}}},
      {"lemniscate", {}},
      {"anharmonic_ps", {{"A", 0.0}, {"B", 0.0}, {"C", 0.0}}},
      {"power_scale", {{"coeff", 1.0}, {"exponent", 0.0}}},
      {"volume_mass", {}},
  };
  return table;
}

const std::map<std::string, std::map<std::string, double>>& closed_form_params() {
  static const std::map<std::string, std::map<std::string, double>> table = {
      {"harmonic", {{"c1", 1.0}, {"c2", 0.0}, {"A", 1.0}}},
      {"anharmonic", {{"A", 1.0}, {"B", 1.0}, {"k", 0.5}, {"sign", 1.0}}},
  };
  return table;
}

const std::set<std::string> kCheckKinds = {"closed_form",  "closed_form_energy", "energy_drift",
                                           "monitor",      "angular_momentum",   "pair_deviation"};

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

std::map<std::string, double> read_params(const json& j, const std::map<std::string, double>& defaults,
                                          const std::string& where) {
  std::map<std::string, double> out = defaults;
  for (const auto& [key, fallback] : defaults) out[key] = get_or<double>(j, key, fallback, where);
  return out;
}

PotentialConfig parse_potential(const json& j, const std::string& where) {
  require_object(j, where);
  PotentialConfig p;
  p.type = get<std::string>(j, "type", where);
  const auto it = potential_params().find(p.type);
  if (it == potential_params().end()) throw ConfigError(where + ": unknown potential '" + p.type + "'");
  std::set<std::string> allowed{"type"};
  for (const auto& [key, v] : it->second) allowed.insert(key);
  if (p.type == "volume_mass") allowed.insert("inner");
  reject_unknown(j, allowed, where);
  p.params = read_params(j, it->second, where);
  if (p.type == "volume_mass") {
    if (!j.contains("inner")) throw ConfigError(where + ": volume_mass needs 'inner'");
    p.inner = std::make_shared<PotentialConfig>(parse_potential(j.at("inner"), where + ".inner"));
    if (p.inner->type == "volume_mass") throw ConfigError(where + ": nested volume_mass");
  }
  return p;
}

json serialize_potential(const PotentialConfig& p) {
  json j = {{"type", p.type}};
  for (const auto& [key, v] : p.params) j[key] = v;
  if (p.inner) j["inner"] = serialize_potential(*p.inner);
  return j;
}

CheckConfig parse_check(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, {"name", "kind", "tol", "above", "monitor", "form", "params"}, where);
  CheckConfig c;
  c.kind = get<std::string>(j, "kind", where);
  if (!kCheckKinds.count(c.kind)) throw ConfigError(where + ": unknown check kind '" + c.kind + "'");
  c.name = get_or<std::string>(j, "name", c.kind, where);
  c.tol = get<double>(j, "tol", where);
  c.above = get_or<bool>(j, "above", false, where);
  c.monitor = get_or<std::string>(j, "monitor", "", where);
  if (c.kind == "monitor" && c.monitor.empty()) throw ConfigError(where + ": monitor check needs 'monitor'");
  if (c.kind == "closed_form" || c.kind == "closed_form_energy") {
    c.form = get<std::string>(j, "form", where);
    const auto it = closed_form_params().find(c.form);
    if (it == closed_form_params().end()) throw ConfigError(where + ": unknown form '" + c.form + "'");
    const json params = j.value("params", json::object());
    require_object(params, where + ".params");
    std::set<std::string> allowed;
    for (const auto& [key, v] : it->second) allowed.insert(key);
    reject_unknown(params, allowed, where + ".params");
    c.params = read_params(params, it->second, where + ".params");
  } else if (j.contains("form") || j.contains("params")) {
    throw ConfigError(where + ": 'form' and 'params' apply to closed-form checks only");
  }
  return c;
}

json serialize_check(const CheckConfig& c) {
  json j = {{"name", c.name}, {"kind", c.kind}, {"tol", c.tol}, {"above", c.above}};
  if (!c.monitor.empty()) j["monitor"] = c.monitor;
  if (!c.form.empty()) {
    j["form"] = c.form;
    j["params"] = json::object();
    for (const auto& [key, v] : c.params) j["params"][key] = v;
  }
  return j;
}

ScenarioKind kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::kFlow, ScenarioKind::kOracle, ScenarioKind::kCrossCheck}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown scenario kind '" + s + "'");
}

std::size_t expected_size(const std::string& rep) {
  try {
    return static_cast<std::size_t>(dimension(representation_from_string(rep)));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void validate(const ScenarioConfig& c) {
  if (c.name.empty()) throw ConfigError("name must not be empty");
  if (c.name.find_first_of("/\\") != std::string::npos) throw ConfigError("name must not contain path separators");
  for (double m : c.masses) {
    if (!(m > 0.0)) throw ConfigError("masses must be positive");
  }
  if (!(c.t1 > c.t0)) throw ConfigError("t_span must be increasing");
  if (c.samples < 1) throw ConfigError("samples must be at least 1");
  try {
    c.integrator.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }

  const InitialConfig& ini = c.initial;
  if (ini.p.empty() == ini.q_dot.empty()) throw ConfigError("initial: give exactly one of 'p' and 'q_dot'");
  if (c.kind == ScenarioKind::kFlow) {
    const std::size_t n = expected_size(ini.representation);
    expected_size(c.representation);
    if (ini.q.size() != n || std::max(ini.p.size(), ini.q_dot.size()) != n) {
      throw ConfigError("initial: " + ini.representation + " state needs " + std::to_string(n) + " components");
    }
  } else {
    if (ini.representation != "Rho") throw ConfigError("initial: oracle runs start from a Rho state");
    if (ini.q.size() != 3 || ini.q_dot.size() != 3) throw ConfigError("initial: oracle runs need rho 'q' and 'q_dot'");
    if (c.dimensions.empty()) throw ConfigError("dimensions must not be empty");
    if (c.kind == ScenarioKind::kOracle && c.dimensions.size() != 1) {
      throw ConfigError("oracle runs take a single dimension; use cross_check for several");
    }
    for (int d : c.dimensions) {
      if (d < 2) throw ConfigError("dimensions must be at least 2");
    }
  }

  for (const auto& ch : c.checks) {
    const bool flow = c.kind == ScenarioKind::kFlow;
    if ((ch.kind == "closed_form" || ch.kind == "closed_form_energy" || ch.kind == "monitor") && !flow) {
      throw ConfigError("check '" + ch.name + "' applies to flow runs only");
    }
    if (ch.kind == "angular_momentum" && flow) throw ConfigError("check '" + ch.name + "' applies to oracle runs only");
    if (ch.kind == "pair_deviation" && c.kind != ScenarioKind::kCrossCheck) {
      throw ConfigError("check '" + ch.name + "' applies to cross_check runs only");
    }
    if (ch.kind == "monitor" &&
        std::find(c.monitors.begin(), c.monitors.end(), ch.monitor) == c.monitors.end()) {
      throw ConfigError("check '" + ch.name + "' reads monitor '" + ch.monitor + "' which is not recorded");
    }
  }
  for (const auto& m : c.monitors) {
    if (m != "P_T" && m != "P_S" && m != "degeneracy") throw ConfigError("unknown monitor '" + m + "'");
  }
}

}  // namespace

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kFlow: return "flow";
    case ScenarioKind::kOracle: return "oracle";
    case ScenarioKind::kCrossCheck: return "cross_check";
  }
  return "unknown";
}

bool operator==(const PotentialConfig& a, const PotentialConfig& b) {
  if (a.type != b.type || a.params != b.params) return false;
  if (!a.inner || !b.inner) return !a.inner && !b.inner;
  return *a.inner == *b.inner;
}

ScenarioConfig parse_config(const json& j) {
  require_object(j, "scenario");
  reject_unknown(j,
                 {"name", "kind", "representation", "masses", "potential", "p_omega", "initial",
                  "dimensions", "t_span", "samples", "integrator", "monitors", "checks", "seed",
                  "output"},
                 "scenario");
  const std::string w = "scenario";
  ScenarioConfig c;
  c.name = get<std::string>(j, "name", w);
  c.kind = kind_from_string(get_or<std::string>(j, "kind", "flow", w));
  c.representation = get_or<std::string>(j, "representation", c.representation, w);
  c.masses = get_or<std::array<double, 3>>(j, "masses", c.masses, w);
  c.potential = parse_potential(j.value("potential", json{{"type", "anharmonic_ps"}}), "potential");
  c.p_omega = get_or<double>(j, "p_omega", 0.0, w);

  const json& ini = j.at("initial");
  require_object(ini, "initial");
  reject_unknown(ini, {"representation", "q", "p", "q_dot"}, "initial");
  c.initial.representation = get_or<std::string>(ini, "representation", c.representation, "initial");
  c.initial.q = get<std::vector<double>>(ini, "q", "initial");
  c.initial.p = get_or<std::vector<double>>(ini, "p", {}, "initial");
  c.initial.q_dot = get_or<std::vector<double>>(ini, "q_dot", {}, "initial");

  c.dimensions = get_or<std::vector<int>>(j, "dimensions", c.dimensions, w);
  const auto span = get<std::array<double, 2>>(j, "t_span", w);
  c.t0 = span[0];
  c.t1 = span[1];
  c.samples = get_or<int>(j, "samples", c.samples, w);

  if (j.contains("integrator")) {
    const json& in = j.at("integrator");
    require_object(in, "integrator");
    reject_unknown(in, {"method", "step", "abs_tol", "rel_tol", "max_steps", "min_step"}, "integrator");
    IntegratorSpec& s = c.integrator;
    try {
      s.method = integrator_from_string(get_or<std::string>(in, "method", to_string(s.method), "integrator"));
    } catch (const Error& e) {
      throw ConfigError(std::string("integrator: ") + e.what());
    }
    s.step = get_or<double>(in, "step", s.step, "integrator");
    s.abs_tol = get_or<double>(in, "abs_tol", s.abs_tol, "integrator");
    s.rel_tol = get_or<double>(in, "rel_tol", s.rel_tol, "integrator");
    s.max_steps = get_or<long>(in, "max_steps", s.max_steps, "integrator");
    s.min_step = get_or<double>(in, "min_step", s.min_step, "integrator");
  }

  c.monitors = get_or<std::vector<std::string>>(j, "monitors", {}, w);
  if (j.contains("checks")) {
    const json& checks = j.at("checks");
    if (!checks.is_array()) throw ConfigError("checks: expected an array");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      c.checks.push_back(parse_check(checks[i], "checks[" + std::to_string(i) + "]"));
    }
  }
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed, w);

  if (j.contains("output")) {
    const json& out = j.at("output");
    require_object(out, "output");
    reject_unknown(out, {"dir", "csv", "summary"}, "output");
    c.output.dir = get_or<std::string>(out, "dir", "", "output");
    c.output.csv = get_or<std::string>(out, "csv", "", "output");
    c.output.summary = get_or<std::string>(out, "summary", "", "output");
  }
  if (c.output.csv.empty()) c.output.csv = c.name + ".csv";
  if (c.output.summary.empty()) c.output.summary = c.name + ".summary.json";

  validate(c);
  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json serialize_config(const ScenarioConfig& c) {
  const IntegratorSpec& s = c.integrator;
  json j = {
      {"name", c.name},
      {"kind", to_string(c.kind)},
      {"representation", c.representation},
      {"masses", c.masses},
      {"potential", serialize_potential(c.potential)},
      {"p_omega", c.p_omega},
      {"dimensions", c.dimensions},
      {"t_span", {c.t0, c.t1}},
      {"samples", c.samples},
      {"integrator",
       {{"method", to_string(s.method)},
        {"step", s.step},
        {"abs_tol", s.abs_tol},
        {"rel_tol", s.rel_tol},
        {"max_steps", s.max_steps},
        {"min_step", s.min_step}}},
      {"monitors", c.monitors},
      {"seed", c.seed},
      {"output", {{"dir", c.output.dir}, {"csv", c.output.csv}, {"summary", c.output.summary}}},
  };
  json ini = {{"representation", c.initial.representation}, {"q", c.initial.q}};
  if (!c.initial.p.empty()) ini["p"] = c.initial.p;
  if (!c.initial.q_dot.empty()) ini["q_dot"] = c.initial.q_dot;
  j["initial"] = ini;
  j["checks"] = json::array();
  for (const auto& ch : c.checks) j["checks"].push_back(serialize_check(ch));
  return j;
}

Potential build_potential(const PotentialConfig& p, const MassTriple& m) {
  const auto& v = p.params;
  if (p.type == "newton") return Potential{NewtonGravity{v.at("gamma")}};
  if (p.type == "log2d") return Potential{LogGravity2D{v.at("gamma")}};
  if (p.type == "harmonic_chain") {
    return Potential{HarmonicChain{v.at("omega"), v.at("nu12"), v.at("nu13"), v.at("nu23")}};
  }
  if (p.type == "lemniscate") return Potential{Lemniscate{}};
  if (p.type == "anharmonic_ps") return Potential{AnharmonicPS{v.at("A"), v.at("B"), v.at("C")}};
  if (p.type == "power_scale") return Potential{make_power_scale_family(v.at("coeff"), v.at("exponent"))};
  if (p.type == "volume_mass") return make_volume_mass(build_potential(*p.inner, m), m);
  throw ConfigError("unknown potential '" + p.type + "'");
}

ClosedForm build_closed_form(const CheckConfig& c) {
  const auto& v = c.params;
  if (c.form == "harmonic") return HarmonicCos2{v.at("c1"), v.at("c2"), v.at("A")};
  if (c.form == "anharmonic") {
    return AnharmonicSn2{v.at("A"), v.at("B"), v.at("k"), v.at("sign") < 0.0 ? -1 : 1};
  }
  throw ConfigError("unknown closed form '" + c.form + "'");
}

}  // namespace threebody::app
