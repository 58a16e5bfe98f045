#pragma once

#include <span>
#include <string>
#include <vector>

#include "equidyn/chart.hpp"

namespace equidyn {

// The joint invariants of a configuration under the scenario's group action.
// Coefficient functions of an interaction family take exactly these values
// as arguments, in this order. `periods[k]` is 0 for a plain real invariant
// and the wrap period (2pi for relative angles, pi for the symmetric-part
// phase of the quantum chart) for circular ones, so comparisons can respect
// the branch cut.
struct InvariantFrame {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> periods;
  bool valid = true;
  std::string reason;
};

int invariant_count(ScenarioId id, int n_agents);
std::vector<std::string> invariant_names(ScenarioId id, int n_agents);
std::vector<double> invariant_periods(ScenarioId id, int n_agents);

// Hot-path evaluation into a caller-provided buffer of invariant_count()
// doubles. Returns false (and fills `reason` when given) if the frame is
// undefined at cfg, e.g. coincident reference agents.
bool frame_values(const Configuration& cfg, std::span<double> out,
                  std::string* reason = nullptr);

InvariantFrame invariant_frame(const Configuration& cfg);

// Sup-distance between two value vectors of the same frame, wrapping the
// circular entries.
double frame_distance(ScenarioId id, int n_agents, std::span<const double> a,
                      std::span<const double> b);

// Per-agent invariants for the exchangeable planar family: distances to the
// other agents in cyclic order from agent+1, then bearings of those legs
// relative to the first one. Defined for se2_plane configurations.
std::vector<std::string> exchangeable_invariant_names(int n_agents);
bool exchangeable_frame_values(const Configuration& cfg, int agent,
                               std::span<double> out, std::string* reason = nullptr);

}  // namespace equidyn
