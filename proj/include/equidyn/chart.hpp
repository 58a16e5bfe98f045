#pragma once

#include <span>
#include <string>
#include <vector>

#include "equidyn/util.hpp"

namespace equidyn {

/// Supported scenario geometries. Each one fixes the per-agent chart, the
/// acting group and the storage conventions.
enum class ScenarioId {
  se2_plane,          // R^2 under SE(2)
  rel_line,           // R^{1,1} under SO(1,1) x translations, metric constant c
  rel_plane,          // R^{1,2} under SO(1,2) x translations
  circle,             // S^1 under SO(2), angle storage in [0, 2pi)
  sphere_so3,         // S^2 under SO(3), stored as unit 3-vectors
  sphere_so2_stereo,  // punctured plane under SO(2) (stereographic sphere chart)
  sl2_plane,          // R^2 \ {0} under SL(2, R)
  unicycle,           // (x, y, theta) under SE(2)
  rel_unicycle,       // (T, rho, alpha, theta) under SO(1,1) x SO(2)
  su2_quantum,        // M_2(C) as 8 reals under SU(2), X -> g X g^T
};

ScenarioId scenario_from_string(const std::string& s);
std::string to_string(ScenarioId id);

/// One configuration of n agents. `c` is the metric constant for the
/// relativistic charts (1 elsewhere and by default).
struct Configuration {
  ScenarioId scenario = ScenarioId::se2_plane;
  int n_agents = 0;
  double c = 1.0;
  std::vector<double> x;

  std::span<double> agent(int i);
  std::span<const double> agent(int i) const;
  int dim() const { return int(x.size()); }
};

int dim_per_agent(ScenarioId id);
int generator_count(ScenarioId id);

/// True when the product Euclidean norm of a field is a joint invariant of
/// the action (isometric actions; used by arclength mode and norm checks).
bool isometric_action(ScenarioId id);

/// Coordinate names, agent-major ("x1,y1,x2,y2" etc.), used by CSV headers,
/// raw-coordinate expressions and reports.
std::vector<std::string> coordinate_names(ScenarioId id, int n_agents);

/// True if local coordinate `k` of an agent block is an angle.
bool is_angle_coord(ScenarioId id, int k);

/// Chart membership. Writes a short reason when returning false.
bool in_chart_domain(const Configuration& cfg, std::string* why = nullptr);

/// Wrap angle coordinates to [0, 2pi) and renormalize sphere agents.
void canonicalize(Configuration& cfg);

/// Sup-distance between configurations, angle coordinates compared mod 2pi.
double config_distance(const Configuration& a, const Configuration& b);

Configuration make_configuration(ScenarioId id, int n_agents,
                                 std::vector<double> coords, double c = 1.0);

}  // namespace equidyn
