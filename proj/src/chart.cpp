#include "equidyn/chart.hpp"

#include <algorithm>
#include <cmath>

namespace equidyn {

ScenarioId scenario_from_string(const std::string& s) {
  if (s == "se2_plane") return ScenarioId::se2_plane;
  if (s == "rel_line") return ScenarioId::rel_line;
  if (s == "rel_plane") return ScenarioId::rel_plane;
  if (s == "circle") return ScenarioId::circle;
  if (s == "sphere_so3") return ScenarioId::sphere_so3;
  if (s == "sphere_so2_stereo") return ScenarioId::sphere_so2_stereo;
  if (s == "sl2_plane") return ScenarioId::sl2_plane;
  if (s == "unicycle") return ScenarioId::unicycle;
  if (s == "rel_unicycle") return ScenarioId::rel_unicycle;
  if (s == "su2_quantum") return ScenarioId::su2_quantum;
  throw ConfigError("unknown scenario: " + s);
}

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::se2_plane: return "se2_plane";
    case ScenarioId::rel_line: return "rel_line";
    case ScenarioId::rel_plane: return "rel_plane";
    case ScenarioId::circle: return "circle";
    case ScenarioId::sphere_so3: return "sphere_so3";
    case ScenarioId::sphere_so2_stereo: return "sphere_so2_stereo";
    case ScenarioId::sl2_plane: return "sl2_plane";
    case ScenarioId::unicycle: return "unicycle";
    case ScenarioId::rel_unicycle: return "rel_unicycle";
    case ScenarioId::su2_quantum: return "su2_quantum";
  }
  return "?";
}

int dim_per_agent(ScenarioId id) {
  switch (id) {
    case ScenarioId::se2_plane: return 2;
    case ScenarioId::rel_line: return 2;
    case ScenarioId::rel_plane: return 3;
    case ScenarioId::circle: return 1;
    case ScenarioId::sphere_so3: return 3;
    case ScenarioId::sphere_so2_stereo: return 2;
    case ScenarioId::sl2_plane: return 2;
    case ScenarioId::unicycle: return 3;
    case ScenarioId::rel_unicycle: return 4;
    case ScenarioId::su2_quantum: return 8;
  }
  return 0;
}

int generator_count(ScenarioId id) {
  switch (id) {
    case ScenarioId::se2_plane: return 3;
    case ScenarioId::rel_line: return 3;
    case ScenarioId::rel_plane: return 6;
    case ScenarioId::circle: return 1;
    case ScenarioId::sphere_so3: return 3;
    case ScenarioId::sphere_so2_stereo: return 1;
    case ScenarioId::sl2_plane: return 3;
    case ScenarioId::unicycle: return 3;
    case ScenarioId::rel_unicycle: return 2;
    case ScenarioId::su2_quantum: return 3;
  }
  return 0;
}

bool isometric_action(ScenarioId id) {
  switch (id) {
    case ScenarioId::se2_plane:
    case ScenarioId::circle:
    case ScenarioId::sphere_so3:
    case ScenarioId::sphere_so2_stereo:
    case ScenarioId::unicycle:
    case ScenarioId::su2_quantum:
      return true;
    default:
      return false;
  }
}

std::span<double> Configuration::agent(int i) {
  int d = dim_per_agent(scenario);
  return std::span<double>(x.data() + std::size_t(i) * d, std::size_t(d));
}

std::span<const double> Configuration::agent(int i) const {
  int d = dim_per_agent(scenario);
  return std::span<const double>(x.data() + std::size_t(i) * d, std::size_t(d));
}

std::vector<std::string> coordinate_names(ScenarioId id, int n_agents) {
  std::vector<std::string> out;
  auto push_block = [&](std::initializer_list<const char*> parts, int i) {
    for (const char* p : parts) out.push_back(std::string(p) + std::to_string(i));
  };
  if (id == ScenarioId::su2_quantum) {
    return {"reX00", "imX00", "reX01", "imX01", "reX10", "imX10", "reX11", "imX11"};
  }
  for (int i = 1; i <= n_agents; ++i) {
    switch (id) {
      case ScenarioId::se2_plane:
      case ScenarioId::sphere_so2_stereo:
      case ScenarioId::sl2_plane:
        push_block({"x", "y"}, i);
        break;
      case ScenarioId::rel_line:
        push_block({"T", "x"}, i);
        break;
      case ScenarioId::rel_plane:
        push_block({"T", "x", "y"}, i);
        break;
      case ScenarioId::circle:
        push_block({"th"}, i);
        break;
      case ScenarioId::sphere_so3:
        push_block({"x", "y", "z"}, i);
        break;
      case ScenarioId::unicycle:
        push_block({"x", "y", "th"}, i);
        break;
      case ScenarioId::rel_unicycle:
        push_block({"T", "rho", "alpha", "th"}, i);
        break;
      case ScenarioId::su2_quantum:
        break;
    }
  }
  return out;
}

bool is_angle_coord(ScenarioId id, int k) {
  switch (id) {
    case ScenarioId::circle: return k == 0;
    case ScenarioId::unicycle: return k == 2;
    case ScenarioId::rel_unicycle: return k == 2 || k == 3;
    default: return false;
  }
}

bool in_chart_domain(const Configuration& cfg, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (int i = 0; i < cfg.n_agents; ++i) {
    auto a = cfg.agent(i);
    switch (cfg.scenario) {
      case ScenarioId::sphere_so3: {
        double n = norm2(a);
        if (std::fabs(n - 1.0) > 1e-6)
          return fail("agent " + std::to_string(i + 1) + " off the unit sphere");
        break;
      }
      case ScenarioId::sphere_so2_stereo:
        if (norm2(a) < 1e-12)
          return fail("agent " + std::to_string(i + 1) + " at the excluded pole");
        break;
      case ScenarioId::sl2_plane:
        if (norm2(a) < 1e-12)
          return fail("agent " + std::to_string(i + 1) + " at the origin");
        break;
      case ScenarioId::rel_unicycle: {
        double T = a[0], rho = a[1];
        if (!(T > 0.0))
          return fail("agent " + std::to_string(i + 1) + " has T <= 0");
        if (!(rho > 0.0))
          return fail("agent " + std::to_string(i + 1) + " has rho <= 0");
        if (!(sqr(cfg.c * T) - sqr(rho) > 0.0))
          return fail("agent " + std::to_string(i + 1) + " outside the timelike cone");
        break;
      }
      default:
        break;
    }
    for (double v : a)
      if (!std::isfinite(v)) return fail("non-finite coordinate");
  }
  return true;
}

void canonicalize(Configuration& cfg) {
  int d = dim_per_agent(cfg.scenario);
  for (int i = 0; i < cfg.n_agents; ++i) {
    auto a = cfg.agent(i);
    for (int k = 0; k < d; ++k)
      if (is_angle_coord(cfg.scenario, k)) a[k] = wrap_2pi(a[k]);
    if (cfg.scenario == ScenarioId::sphere_so3) {
      double n = norm2(a);
      if (n > 0.0)
        for (double& v : a) v /= n;
    }
  }
}

double config_distance(const Configuration& a, const Configuration& b) {
  int d = dim_per_agent(a.scenario);
  double m = 0.0;
  for (int i = 0; i < int(a.x.size()); ++i) {
    int k = i % d;
    double diff = is_angle_coord(a.scenario, k) ? angle_distance(a.x[i], b.x[i])
                                                : std::fabs(a.x[i] - b.x[i]);
    m = std::max(m, diff);
  }
  return m;
}

Configuration make_configuration(ScenarioId id, int n_agents,
                                 std::vector<double> coords, double c) {
  if (n_agents < 1) throw ConfigError("n_agents must be >= 1");
  if (id == ScenarioId::su2_quantum && n_agents != 1)
    throw ConfigError("su2_quantum stores the joint state as one agent block");
  std::size_t want = std::size_t(n_agents) * dim_per_agent(id);
  if (coords.size() != want)
    throw ConfigError("expected " + std::to_string(want) + " coordinates, got " +
                      std::to_string(coords.size()));
  if (!(c > 0.0)) throw ConfigError("metric constant c must be positive");
  Configuration cfg;
  cfg.scenario = id;
  cfg.n_agents = n_agents;
  cfg.c = c;
  cfg.x = std::move(coords);
  canonicalize(cfg);
  std::string why;
  if (!in_chart_domain(cfg, &why)) throw DomainError("configuration outside chart: " + why);
  return cfg;
}

}  // namespace equidyn
