#include "equidyn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "equidyn/output.hpp"
#include "equidyn/util.hpp"

namespace equidyn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw ConfigError(origin + ": " + msg);
}

double number_field(const json& j, const char* key, const std::string& origin) {
  const auto& v = j.at(key);
  if (!v.is_number()) fail(origin, std::string("'") + key + "' must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(origin, std::string("'") + key + "' must be finite");
  return d;
}

std::vector<std::vector<std::string>> parse_coefficients(
    const json& j, const std::vector<std::string>& slots, bool shared, int n_agents,
    const std::string& origin) {
  if (!j.is_object()) fail(origin, "'coefficients' must be an object");
  auto slot_list = [&] {
    std::string s;
    for (const auto& name : slots) {
      if (!s.empty()) s += ", ";
      s += name;
    }
    return s;
  };
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(slots.begin(), slots.end(), key) == slots.end())
      fail(origin, "unknown coefficient slot '" + key + "' (expected: " + slot_list() + ")");
  }
  std::vector<std::vector<std::string>> out;
  const int per_slot = shared ? 1 : n_agents;
  for (const auto& name : slots) {
    if (!j.contains(name))
      fail(origin, "missing coefficient slot '" + name + "' (expected: " + slot_list() + ")");
    const auto& v = j.at(name);
    std::vector<std::string> exprs;
    if (v.is_string()) {
      exprs.assign(static_cast<std::size_t>(per_slot), v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_string())
          fail(origin, "coefficient slot '" + name + "' must hold strings");
        exprs.push_back(e.get<std::string>());
      }
      if (int(exprs.size()) != per_slot) {
        std::ostringstream msg;
        msg << "coefficient slot '" << name << "' has " << exprs.size()
            << " expressions, expected " << per_slot
            << (shared ? " (this family shares its coefficients)" : "");
        fail(origin, msg.str());
      }
    } else {
      fail(origin, "coefficient slot '" + name + "' must be a string or a list of strings");
    }
    out.push_back(std::move(exprs));
  }
  return out;
}

}  // namespace

ScenarioFile parse_scenario_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be a JSON object");

  static const std::set<std::string> known = {
      "label",        "name",     "scenario",     "agents",    "c",
      "family",       "coefficients", "initial",  "horizon",   "dt",
      "integrator",   "rtol",     "atol",         "record_every",
      "arclength",    "checks",   "outputs"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) fail(origin, "unknown key '" + key + "'");
  }
  for (const char* req : {"scenario", "agents", "coefficients", "initial", "horizon"})
    if (!j.contains(req)) fail(origin, std::string("missing required key '") + req + "'");

  ScenarioFile sc;
  sc.name = std::filesystem::path(origin).stem().string();
  if (sc.name.empty()) sc.name = "scenario";
  try {
    if (j.contains("label")) {
      if (!j.at("label").is_string()) fail(origin, "'label' must be a string");
      sc.label = j.at("label").get<std::string>();
    }
    if (j.contains("name")) {
      if (!j.at("name").is_string() || j.at("name").get<std::string>().empty())
        fail(origin, "'name' must be a non-empty string");
      sc.name = j.at("name").get<std::string>();
    }
    if (!j.at("scenario").is_string()) fail(origin, "'scenario' must be a string");
    sc.family.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    if (!j.at("agents").is_number_integer()) fail(origin, "'agents' must be an integer");
    sc.family.n_agents = j.at("agents").get<int>();
    if (j.contains("c")) sc.family.c = number_field(j, "c", origin);
    if (j.contains("family")) {
      if (!j.at("family").is_string()) fail(origin, "'family' must be a string");
      sc.family.kind = family_kind_from_string(j.at("family").get<std::string>());
    }

    const auto slots =
        family_slot_names(sc.family.scenario, sc.family.kind, sc.family.n_agents);
    sc.family.coefficients =
        parse_coefficients(j.at("coefficients"), slots,
                           family_shares_coefficients(sc.family.kind),
                           sc.family.n_agents, origin);

    if (!j.at("initial").is_array()) fail(origin, "'initial' must be an array of numbers");
    for (const auto& v : j.at("initial")) {
      if (!v.is_number()) fail(origin, "'initial' must be an array of numbers");
      sc.initial.push_back(v.get<double>());
    }
    sc.horizon = number_field(j, "horizon", origin);
    if (sc.horizon <= 0) fail(origin, "'horizon' must be positive");

    if (j.contains("integrator")) {
      if (!j.at("integrator").is_string()) fail(origin, "'integrator' must be a string");
      sc.integrator.kind = integrator_from_string(j.at("integrator").get<std::string>());
    }
    if (j.contains("dt")) {
      sc.integrator.dt = number_field(j, "dt", origin);
      if (sc.integrator.dt <= 0) fail(origin, "'dt' must be positive");
    }
    if (j.contains("rtol")) {
      sc.integrator.rtol = number_field(j, "rtol", origin);
      if (sc.integrator.rtol <= 0) fail(origin, "'rtol' must be positive");
    }
    if (j.contains("atol")) {
      sc.integrator.atol = number_field(j, "atol", origin);
      if (sc.integrator.atol <= 0) fail(origin, "'atol' must be positive");
    }
    if (j.contains("record_every")) {
      sc.integrator.record_every = number_field(j, "record_every", origin);
      if (sc.integrator.record_every < 0) fail(origin, "'record_every' must be >= 0");
    }
    if (j.contains("arclength")) {
      if (!j.at("arclength").is_boolean()) fail(origin, "'arclength' must be a boolean");
      sc.integrator.arclength = j.at("arclength").get<bool>();
    }
    if (j.contains("checks")) {
      const auto& list = j.at("checks");
      if (!list.is_array()) fail(origin, "'checks' must be an array");
      for (const auto& entry : list) {
        CheckRequest req;
        if (entry.is_string()) {
          req.id = check_id_from_string(entry.get<std::string>());
        } else if (entry.is_object()) {
          for (const auto& [key, value] : entry.items()) {
            (void)value;
            if (key != "name" && key != "tolerance")
              fail(origin, "check entries accept only 'name' and 'tolerance', got '" + key + "'");
          }
          if (!entry.contains("name") || !entry.at("name").is_string())
            fail(origin, "check entries need a 'name' string");
          req.id = check_id_from_string(entry.at("name").get<std::string>());
          if (entry.contains("tolerance")) {
            if (!entry.at("tolerance").is_number())
              fail(origin, "check 'tolerance' must be a number");
            req.tolerance = entry.at("tolerance").get<double>();
            if (!(req.tolerance > 0)) fail(origin, "check 'tolerance' must be positive");
          }
        } else {
          fail(origin, "'checks' entries must be strings or {name, tolerance} objects");
        }
        sc.checks.push_back(req);
      }
    }
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      if (!o.is_object()) fail(origin, "'outputs' must be an object");
      for (const auto& [key, value] : o.items()) {
        if (key != "csv" && key != "svg")
          fail(origin, "'outputs' accepts only 'csv' and 'svg', got '" + key + "'");
        if (!value.is_boolean()) fail(origin, "'outputs." + key + "' must be a boolean");
      }
      if (o.contains("csv")) sc.write_csv = o.at("csv").get<bool>();
      if (o.contains("svg")) sc.write_svg = o.at("svg").get<bool>();
    }
  } catch (const json::exception& e) {
    fail(origin, std::string("malformed value: ") + e.what());
  } catch (const ConfigError& e) {
    // Errors raised by the name-to-enum helpers lack the file location.
    std::string msg = e.what();
    if (msg.rfind(origin + ": ", 0) == 0) throw;
    fail(origin, msg);
  }

  // Validate everything that does not need a full run: the family spec
  // (agent counts, slot arities, expression syntax) and the state size.
  try {
    (void)build_family(sc.family);
    (void)initial_configuration(sc);
  } catch (const ConfigError& e) {
    fail(origin, e.what());
  }
  return sc;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str(), path);
}

Configuration initial_configuration(const ScenarioFile& sc) {
  return make_configuration(sc.family.scenario, sc.family.n_agents, sc.initial,
                            sc.family.c);
}

std::string scenario_directory() {
  if (const char* env = std::getenv("EQUIDYN_SCENARIOS"); env && *env) return env;
#ifdef EQUIDYN_SCENARIO_DIR
  return EQUIDYN_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

RunOutputs run_scenario(const ScenarioFile& sc, const std::string& out_dir) {
  DynamicsFamily fam = build_family(sc.family);
  Configuration x0 = initial_configuration(sc);

  RunOutputs out;
  out.trajectory = integrate(fam, x0, sc.horizon, sc.integrator);
  out.invariants = quotient_observable(out.trajectory);

  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir);
  if (sc.write_csv) {
    out.trajectory_csv = (base / (sc.name + "_traj.csv")).string();
    out.invariants_csv = (base / (sc.name + "_invariants.csv")).string();
    write_trajectory_csv(out.trajectory_csv, out.trajectory);
    write_invariants_csv(out.invariants_csv, out.invariants);
  }
  if (sc.write_svg) {
    out.svg = (base / (sc.name + ".svg")).string();
    std::string title = sc.label;
    if (title.empty())
      title = to_string(sc.family.scenario) + " / " + to_string(sc.family.kind);
    write_trajectory_svg(out.svg, out.trajectory, title);
  }
  return out;
}

}  // namespace equidyn
