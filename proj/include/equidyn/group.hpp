#pragma once

#include <array>
#include <vector>

#include "equidyn/chart.hpp"
#include "equidyn/util.hpp"

namespace equidyn {

/// One element of the acting group, in a per-scenario flat layout:
///   se2_plane / unicycle : {tau, ax, ay}
///   rel_line             : {rapidity, aT, ax}
///   rel_plane            : {M[0..8] row-major, aT, ax, ay}
///   circle / stereo      : {alpha}
///   sphere_so3           : {R[0..8] row-major}
///   sl2_plane            : {g[0..3] row-major}
///   rel_unicycle         : {rapidity, omega}
///   su2_quantum          : {re g00, im g00, re g01, im g01, re g10, ...}
/// `c` is the metric constant of the relativistic charts the element acts on.
struct GroupElement {
  ScenarioId scenario = ScenarioId::se2_plane;
  double c = 1.0;
  std::array<double, 12> a{};
};

GroupElement identity_element(ScenarioId id, double c = 1.0);

/// Bounded random element, scaled for the checker's sampling (rotations over
/// the full circle, translations in [-2,2], rapidities small enough to keep
/// sampled configurations inside their charts).
GroupElement random_element(ScenarioId id, Rng& rng, double c = 1.0);

/// Group product: act(compose(g2, g1), x) == act(g2, act(g1, x)).
GroupElement compose(const GroupElement& g2, const GroupElement& g1);

/// Residual of the element's defining constraints (orthogonality,
/// determinant, metric preservation); 0 for unconstrained parameter layouts.
double element_defect(const GroupElement& g);

/// Diagonal action on a configuration. Throws DomainError when the image
/// leaves the chart (possible for rel_unicycle boosts).
Configuration act(const GroupElement& g, const Configuration& cfg);

/// Value of the k-th diagonal algebra generator field at cfg.
std::vector<double> generator_field(ScenarioId id, int k, const Configuration& cfg);

/// Closed-form one-parameter subgroup exp(t * l_k).
GroupElement group_exp(ScenarioId id, int k, double t, double c = 1.0);

/// Flow of the k-th generator field for time t, computed numerically
/// (independent route from group_exp; the two must agree).
Configuration exp_action(ScenarioId id, int k, double t, const Configuration& cfg);

/// The three skew-quaternion matrices spanning the centralizer of the
/// SU(2)-fixed-axis action on R^4 (row-major).
std::array<std::array<double, 16>, 3> quaternion_matrices();

/// True when {x, i.x, j.x, k.x} spans R^4 (holds for every x != 0).
bool quaternion_rank_check(const std::array<double, 4>& x, double* det_out = nullptr);

}  // namespace equidyn
