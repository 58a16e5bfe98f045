#pragma once

#include <string>
#include <vector>

#include "equidyn/family.hpp"

namespace equidyn {

enum class IntegratorKind { rk4, rkf45 };

IntegratorKind integrator_from_string(const std::string& s);
std::string to_string(IntegratorKind k);

struct IntegratorOptions {
  IntegratorKind kind = IntegratorKind::rk4;
  double dt = 1e-3;        // rk4 step; rkf45 initial step
  double rtol = 1e-8;      // rkf45 relative tolerance
  double atol = 1e-10;     // rkf45 absolute tolerance
  double dt_min = 1e-9;
  double dt_max = 0.1;
  double record_every = 0.0;  // 0 records every accepted step
  // Reparameterize to unit speed (the field direction is followed at
  // arclength rate). Only meaningful when the chart norm is G-invariant,
  // i.e. isometric_action(scenario).
  bool arclength = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> states;
  bool domain_violation = false;
  std::string violation_reason;
  double end_time = 0.0;
};

// Propagate x0 for `horizon` time units. On a domain exit the trajectory is
// truncated at the last good state and flagged instead of throwing.
Trajectory integrate(const DynamicsFamily& fam, const Configuration& x0, double horizon,
                     const IntegratorOptions& opt);

// Light fixed-step RK4 propagation used by the property checks; cfg is
// advanced in place. Returns false when the field leaves its domain.
bool flow_state(const DynamicsFamily& fam, Configuration& cfg, double horizon, double dt,
                std::string* why = nullptr);

// Invariant values along a trajectory, truncated at the first state where
// the frame degenerates.
struct QuotientTrace {
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
};

QuotientTrace quotient_observable(const Trajectory& traj);

}  // namespace equidyn
