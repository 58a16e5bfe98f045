#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "equidyn/family.hpp"
#include "equidyn/group.hpp"

namespace equidyn {

enum class CheckId {
  generator_commutation,     // [F, l_k] vanishes for every generator field l_k
  flow_equivariance,         // act(g, flow(x)) equals flow(act(g, x))
  frame_invariance,          // invariant values are constant along orbits
  chart_consistency,         // field is 2pi-periodic in every angle coordinate
  structure_constants,       // numeric generator brackets match the algebra table
  rolling_constraint,        // velocity stays in the heading/steering span
  permutation_equivariance,  // agent relabeling commutes with the field
  norm_conservation,         // quantum: Frobenius norm constant along the flow;
                             // other isometric charts: ||F||^2 is jointly radial
};

std::string to_string(CheckId id);
CheckId check_id_from_string(const std::string& s);

struct CheckResult {
  CheckId id;
  bool applicable = true;
  bool passed = true;
  int samples = 0;     // conclusive samples; 0 with applicable=true means
                       // inconclusive (every sample left the domain)
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;  // where the worst residual occurred
};

inline bool is_inconclusive(const CheckResult& r) { return r.applicable && r.samples == 0; }

struct CheckOptions {
  std::uint64_t seed = 2026;
  int samples = 50;
  int group_elements = 20;
  double flow_time = 0.2;
  double flow_dt = 2e-3;
  // Run the sample loops across OpenMP threads when compiled in. Results are
  // byte-identical either way: every sample draws from its own substream.
  bool parallel = true;
  // Empty runs every check; otherwise only the listed ones appear in the
  // results (scenario files can restrict their check list).
  std::vector<CheckId> only;
  // Per-check tolerance overrides; later entries win.
  std::vector<std::pair<CheckId, double>> tolerances;
};

// Draws a configuration with safety margins (separated agents, timelike
// separations away from the light cone, non-degenerate frames) so that
// finite-difference probes around it stay in the family's domain.
Configuration sample_configuration(ScenarioId id, int n_agents, double c, Rng& rng);

std::vector<CheckResult> run_checks(const DynamicsFamily& fam, const CheckOptions& opt);

bool all_passed(const std::vector<CheckResult>& results);

std::string format_report(const DynamicsFamily& fam, const CheckOptions& opt,
                          const std::vector<CheckResult>& results);

}  // namespace equidyn
