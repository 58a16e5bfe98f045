#pragma once

#include <span>
#include <string>
#include <vector>

#include "equidyn/chart.hpp"
#include "equidyn/expr.hpp"

namespace equidyn {

// Which interaction family a configuration file selects. `standard` is the
// full equivariant family of the scenario (coefficients are free functions
// of the joint invariants, one expression per agent and basis slot). The
// others are structured subfamilies or deliberately broken controls used to
// demonstrate that the property checks have teeth.
enum class FamilyKind {
  standard,
  exchangeable,        // se2_plane: one shared (lambda, mu) pair, agents interchangeable
  gradient,            // se2_plane, 2 agents: lambda2 = -lambda1 = Lambda(rho2), mu = 0
  broken_translation,  // se2_plane control: adds a raw-coordinate term to agent 1
  raw_angle,           // circle control: coefficients read absolute angles
  lateral_slip,        // unicycle control: constant sideways push, violates the
                       // rolling constraint while staying equivariant
};

FamilyKind family_kind_from_string(const std::string& s);
std::string to_string(FamilyKind k);

// Names of the coefficient slots of one agent, e.g. {"lambda", "mu"} for the
// planar family. Configuration files key their expression lists by these.
std::vector<std::string> family_slot_names(ScenarioId id, FamilyKind kind, int n_agents);

// The variable list coefficient expressions are parsed against.
std::vector<std::string> family_variables(ScenarioId id, FamilyKind kind, int n_agents);

// True when the kind shares one expression per slot across all agents
// (exchangeable, gradient) instead of one per agent.
bool family_shares_coefficients(FamilyKind kind);

struct FamilySpec {
  ScenarioId scenario = ScenarioId::se2_plane;
  FamilyKind kind = FamilyKind::standard;
  int n_agents = 2;
  double c = 1.0;
  // coefficients[s] lists the per-agent expressions of slot s, in agent
  // order; for shared kinds each slot holds exactly one expression.
  std::vector<std::vector<std::string>> coefficients;
};

class DynamicsFamily {
 public:
  ScenarioId scenario() const { return scenario_; }
  FamilyKind kind() const { return kind_; }
  int n_agents() const { return n_agents_; }
  double c() const { return c_; }
  int dim() const { return n_agents_ * dim_per_agent(scenario_); }

  // Writes the field value at cfg into out (dim() doubles). Returns false
  // when cfg is outside the family's domain, e.g. reference agents coincide.
  bool eval(const Configuration& cfg, std::span<double> out,
            std::string* why = nullptr) const;

  bool in_domain(const Configuration& cfg, std::string* why = nullptr) const;

  // Exchangeable fields commute with relabeling the agents.
  bool permutation_equivariant() const { return kind_ == FamilyKind::exchangeable; }

  // Unicycle-type fields must keep each agent's velocity in the span of its
  // heading direction and its steering direction.
  bool has_rolling_constraint() const {
    return scenario_ == ScenarioId::unicycle || scenario_ == ScenarioId::rel_unicycle;
  }

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<std::string>& slot_names() const { return slot_names_; }
  const CompiledExpr& coefficient(int agent, int slot) const;

 private:
  friend DynamicsFamily build_family(const FamilySpec&);

  ScenarioId scenario_ = ScenarioId::se2_plane;
  FamilyKind kind_ = FamilyKind::standard;
  int n_agents_ = 0;
  double c_ = 1.0;
  std::vector<std::string> variables_;
  std::vector<std::string> slot_names_;
  std::vector<CompiledExpr> coeffs_;  // [agent * slots + slot], or [slot] if shared
};

// Validates the spec (agent counts, slot counts) and compiles every
// coefficient expression against the family's variable list.
DynamicsFamily build_family(const FamilySpec& spec);

}  // namespace equidyn
