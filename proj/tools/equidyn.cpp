// Command line front end: integrate scenario files, run the equivariance
// property checks against them, and regenerate the curated example gallery.
//
// Exit codes: 0 success, 1 property check failed, 2 configuration error,
// 3 domain violation during integration, 4 inconclusive (nothing to check).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "equidyn/check.hpp"
#include "equidyn/scenario.hpp"
#include "equidyn/util.hpp"

namespace fs = std::filesystem;
using namespace equidyn;

namespace {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* env = std::getenv("EQUIDYN_SEED"); env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    std::cerr << "warning: ignoring malformed EQUIDYN_SEED='" << env << "'\n";
  }
  return fallback;
}

int cmd_run(const std::string& file, const std::string& out_dir) {
  ScenarioFile sc = load_scenario_file(file);
  RunOutputs out = run_scenario(sc, out_dir);
  std::printf("scenario   %s\n", to_string(sc.family.scenario).c_str());
  std::printf("family     %s, %d agents\n", to_string(sc.family.kind).c_str(),
              sc.family.n_agents);
  std::printf("integrator %s, horizon %g, reached t = %.6g (%zu snapshots)\n",
              to_string(sc.integrator.kind).c_str(), sc.horizon,
              out.trajectory.end_time, out.trajectory.states.size());
  for (const std::string* p : {&out.trajectory_csv, &out.invariants_csv, &out.svg})
    if (!p->empty()) std::printf("wrote      %s\n", p->c_str());
  if (out.trajectory.domain_violation) {
    std::fprintf(stderr, "domain violation at t = %.6g: %s\n",
                 out.trajectory.end_time, out.trajectory.violation_reason.c_str());
    return 3;
  }
  return 0;
}

// "check=1e-5" strings from the command line.
std::pair<CheckId, double> parse_tol_override(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--tol-override expects check=value, got '" + s + "'");
  CheckId id = check_id_from_string(s.substr(0, eq));
  char* end = nullptr;
  const std::string num = s.substr(eq + 1);
  double tol = std::strtod(num.c_str(), &end);
  if (!end || *end != '\0' || !(tol > 0))
    throw ConfigError("--tol-override value must be a positive number, got '" + num + "'");
  return {id, tol};
}

std::string report_json(const ScenarioFile& sc, const CheckOptions& opt,
                        const std::vector<CheckResult>& results) {
  nlohmann::json j;
  j["scenario"] = to_string(sc.family.scenario);
  j["family"] = to_string(sc.family.kind);
  j["agents"] = sc.family.n_agents;
  j["c"] = sc.family.c;
  j["seed"] = opt.seed;
  j["samples_requested"] = opt.samples;
  j["group_elements"] = opt.group_elements;
  bool inconclusive = false;
  auto list = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json e;
    e["name"] = to_string(r.id);
    e["applicable"] = r.applicable;
    if (r.applicable) {
      e["samples"] = r.samples;
      e["worst_residual"] = r.worst;
      e["tolerance"] = r.tolerance;
      if (is_inconclusive(r)) {
        e["verdict"] = "inconclusive";
        inconclusive = true;
      } else {
        e["verdict"] = r.passed ? "pass" : "fail";
      }
      if (!r.detail.empty()) e["detail"] = r.detail;
    }
    list.push_back(std::move(e));
  }
  j["checks"] = std::move(list);
  j["overall"] = !all_passed(results) ? "fail" : (inconclusive ? "inconclusive" : "pass");
  return j.dump(2) + "\n";
}

int cmd_verify(const std::string& file, std::uint64_t seed, int samples, bool serial,
               std::string report_path, const std::vector<std::string>& tol_flags) {
  ScenarioFile sc = load_scenario_file(file);
  DynamicsFamily fam = build_family(sc.family);

  CheckOptions opt;
  opt.seed = seed;
  opt.samples = samples;
  opt.parallel = !serial;
  for (const auto& req : sc.checks) {
    opt.only.push_back(req.id);
    if (req.tolerance > 0) opt.tolerances.emplace_back(req.id, req.tolerance);
  }
  // Command line overrides come after the file's, so they win.
  for (const auto& s : tol_flags) opt.tolerances.push_back(parse_tol_override(s));

  auto results = run_checks(fam, opt);
  std::fputs(format_report(fam, opt, results).c_str(), stdout);

  if (report_path.empty()) report_path = sc.name + "_report.json";
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "cannot open report file: %s\n", report_path.c_str());
      return 2;
    }
    out << report_json(sc, opt, results);
  }
  std::printf("wrote      %s\n", report_path.c_str());

  if (!all_passed(results)) return 1;
  for (const auto& r : results)
    if (is_inconclusive(r)) return 4;
  return 0;
}

int cmd_examples(const std::string& set_name, const std::string& out_root,
                 const std::string& dir_flag) {
  const std::string dir = dir_flag.empty() ? scenario_directory() : dir_flag;
  if (!fs::is_directory(dir))
    throw ConfigError("scenario directory not found: " + dir);

  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::string stem = entry.path().stem().string();
    bool take = false;
    if (set_name == "all")
      // Negative controls and excluded-set demos are for `verify`/`run` demos,
      // not the gallery.
      take = stem.rfind("broken_", 0) != 0 && stem.rfind("singular_", 0) != 0;
    else
      take = stem.rfind(set_name, 0) == 0;
    if (take) stems.push_back(stem);
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty())
    throw ConfigError("no scenario files in " + dir + " match set '" + set_name + "'");

  int worst = 0;
  for (const auto& stem : stems) {
    const std::string file = (fs::path(dir) / (stem + ".json")).string();
    std::printf("== %s\n", stem.c_str());
    try {
      int rc = cmd_run(file, out_root);  // outputs are <stem>-prefixed, no clashes
      worst = std::max(worst, rc);
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "%s\n", e.what());
      worst = std::max(worst, 2);
    }
  }
  std::printf("ran %zu scenarios from %s\n", stems.size(), dir.c_str());
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant interaction dynamics: integrate and property-check"};
  app.require_subcommand(1);

  std::string run_file, run_out = "out";
  auto* run = app.add_subcommand("run", "integrate one scenario file, write CSV + SVG");
  run->add_option("file", run_file, "scenario JSON file")->required();
  run->add_option("--out", run_out, "output directory (default: out)");

  std::string ver_file, ver_report;
  std::uint64_t ver_seed = seed_from_env(2026);
  int ver_samples = 50;
  bool ver_serial = false;
  std::vector<std::string> ver_tols;
  auto* ver = app.add_subcommand("verify", "run the equivariance checks on a scenario");
  ver->add_option("file", ver_file, "scenario JSON file")->required();
  ver->add_option("--seed", ver_seed, "sampling seed (default: EQUIDYN_SEED or 2026)");
  ver->add_option("--samples", ver_samples, "configurations per check (default: 50)")
      ->check(CLI::PositiveNumber);
  ver->add_flag("--serial", ver_serial, "disable OpenMP sampling");
  ver->add_option("--report", ver_report,
                  "path for the JSON report (default: <name>_report.json)");
  ver->add_option("--tol-override", ver_tols,
                  "override a check tolerance, e.g. flow_equivariance=1e-5 (repeatable)");

  std::string ex_set, ex_out = "out", ex_dir;
  auto* ex = app.add_subcommand("examples", "integrate a curated set of scenario files");
  ex->add_option("set", ex_set,
                 "file-name prefix (A, B, C, D, E, unicycle, quantum, ...) or 'all'")
      ->required();
  ex->add_option("--out", ex_out, "output root, one subdirectory per scenario");
  ex->add_option("--scenarios", ex_dir, "scenario directory (default: EQUIDYN_SCENARIOS "
                                        "or the build-time location)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_file, run_out);
    if (ver->parsed())
      return cmd_verify(ver_file, ver_seed, ver_samples, ver_serial, ver_report, ver_tols);
    if (ex->parsed()) return cmd_examples(ex_set, ex_out, ex_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  }
  return 2;
}
