#pragma once

#include <string>
#include <vector>

#include "equidyn/check.hpp"
#include "equidyn/family.hpp"
#include "equidyn/integrate.hpp"

namespace equidyn {

// A check requested by a scenario file, with an optional tolerance override.
struct CheckRequest {
  CheckId id;
  double tolerance = -1.0;  // <= 0 means "use the check's default"
};

// One simulation setup as described by a JSON configuration file:
//
//   {
//     "label": "two pursuers",            // optional, free text
//     "name": "a3",                       // optional, defaults to file stem
//     "scenario": "se2_plane",
//     "agents": 2,
//     "c": 1.0,                            // optional, metric constant
//     "family": "standard",               // optional, see FamilyKind
//     "coefficients": {
//       "lambda": ["1 - rho2", "0"],      // one expression per agent,
//       "mu": "0.5"                        // or one string for all agents
//     },
//     "initial": [0, 0, 1, 1],             // agent-major chart coordinates
//     "horizon": 10.0,
//     "integrator": "rk4",                // optional: rk4 | rkf45
//     "dt": 0.001,                         // optional
//     "rtol": 1e-8, "atol": 1e-10,         // optional, rkf45 only
//     "record_every": 0.01,                // optional, 0 = every step
//     "arclength": false,                  // optional, isometric charts only
//     "checks": ["generator_commutation",  // optional, restricts `verify`;
//       {"name": "flow_equivariance", "tolerance": 1e-5}],  // may override tolerances
//     "outputs": {"csv": true, "svg": true} // optional, default both true
//   }
//
// Unknown keys are rejected so typos fail loudly.
struct ScenarioFile {
  std::string label;
  std::string name;  // used as the output file prefix
  FamilySpec family;
  std::vector<double> initial;
  double horizon = 0.0;
  IntegratorOptions integrator;
  std::vector<CheckRequest> checks;  // empty = run the full suite
  bool write_csv = true;
  bool write_svg = true;
};

// Parses and validates one file, including compiling every coefficient
// expression. Raises ConfigError with the file path in the message.
ScenarioFile load_scenario_file(const std::string& path);

// Same, from an in-memory JSON string; `origin` labels error messages and
// its stem seeds the default name.
ScenarioFile parse_scenario_json(const std::string& text, const std::string& origin);

Configuration initial_configuration(const ScenarioFile& sc);

// Directory holding the curated example files: the EQUIDYN_SCENARIOS
// environment variable when set, otherwise the location baked in at build
// time.
std::string scenario_directory();

struct RunOutputs {
  Trajectory trajectory;
  QuotientTrace invariants;
  std::string trajectory_csv;  // empty when the scenario disables CSV output
  std::string invariants_csv;
  std::string svg;             // empty when the scenario disables SVG output
};

// Integrates the scenario and writes <name>_traj.csv, <name>_invariants.csv
// and <name>.svg into out_dir (created if missing), honoring the scenario's
// output switches. Files are written even when integration stops early on a
// domain violation, so partial runs stay inspectable.
RunOutputs run_scenario(const ScenarioFile& sc, const std::string& out_dir);

}  // namespace equidyn
