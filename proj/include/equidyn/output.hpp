#pragma once

#include <string>

#include "equidyn/integrate.hpp"

namespace equidyn {

// Writes one row per recorded snapshot: "t,<coordinate names...>" header,
// values printed with %.17g so a re-read reproduces the doubles exactly.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Same format for an invariant trace: "t,<invariant names...>".
void write_invariants_csv(const std::string& path, const QuotientTrace& trace);

// Planar projection of the trajectory as a standalone SVG (800x800 viewBox,
// one polyline per agent, start/end markers). The projection depends on the
// chart: planar scenarios plot (x, y) directly, the circle plots the embedded
// point (cos th, sin th), spacetime charts plot (x, c*T), and so on.
void write_trajectory_svg(const std::string& path, const Trajectory& traj,
                          const std::string& title);

}  // namespace equidyn
