#include "equidyn/family.hpp"

#include <array>
#include <cmath>

#include "equidyn/c2.hpp"
#include "equidyn/invariants.hpp"
#include "equidyn/takagi.hpp"

namespace equidyn {
namespace {

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

std::array<double, 3> cross3(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Unit tangent at p pointing away from q along the connecting geodesic
// (the sphere gradient of the distance to q). Defined when p, q are neither
// coincident nor antipodal.
bool unit_gradient(std::span<const double> p, std::span<const double> q,
                   std::array<double, 3>& h) {
  double dot = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
  auto c = cross3(p, q);
  double s = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  if (s < 1e-9) return false;
  for (int k = 0; k < 3; ++k) h[k] = (dot * p[k] - q[k]) / s;
  return true;
}

// First two members of {0,1,2} \ {i}; every agent beyond the third refers to
// the leading pair.
void tangent_refs(int i, int n, int& a, int& b) {
  if (n == 2) {
    a = b = 1 - i;
    return;
  }
  int picked[2];
  int m = 0;
  for (int k = 0; k < 3 && m < 2; ++k)
    if (k != i) picked[m++] = k;
  a = picked[0];
  b = picked[1];
}

}  // namespace

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "standard") return FamilyKind::standard;
  if (s == "exchangeable") return FamilyKind::exchangeable;
  if (s == "gradient") return FamilyKind::gradient;
  if (s == "broken_translation") return FamilyKind::broken_translation;
  if (s == "raw_angle") return FamilyKind::raw_angle;
  if (s == "lateral_slip") return FamilyKind::lateral_slip;
  throw ConfigError("unknown family kind: " + s);
}

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::standard: return "standard";
    case FamilyKind::exchangeable: return "exchangeable";
    case FamilyKind::gradient: return "gradient";
    case FamilyKind::broken_translation: return "broken_translation";
    case FamilyKind::raw_angle: return "raw_angle";
    case FamilyKind::lateral_slip: return "lateral_slip";
  }
  return "?";
}

bool family_shares_coefficients(FamilyKind kind) {
  return kind == FamilyKind::exchangeable || kind == FamilyKind::gradient;
}

std::vector<std::string> family_slot_names(ScenarioId id, FamilyKind kind, int n_agents) {
  switch (kind) {
    case FamilyKind::gradient:
      return {"lambda"};
    case FamilyKind::exchangeable:
    case FamilyKind::broken_translation:
      return {"lambda", "mu"};
    case FamilyKind::raw_angle:
      return {"phi"};
    case FamilyKind::lateral_slip:
      return {"u", "v"};
    case FamilyKind::standard:
      break;
  }
  switch (id) {
    case ScenarioId::se2_plane: return {"lambda", "mu"};
    case ScenarioId::rel_line: return {"phi", "psi"};
    case ScenarioId::rel_plane:
      return n_agents == 2 ? std::vector<std::string>{"psi"}
                           : std::vector<std::string>{"phi", "psi"};
    case ScenarioId::circle: return {"phi"};
    case ScenarioId::sphere_so3: return {"phi1", "phi2"};
    case ScenarioId::sphere_so2_stereo: return {"phi", "psi"};
    case ScenarioId::sl2_plane:
      return n_agents == 1 ? std::vector<std::string>{"alpha"}
                           : std::vector<std::string>{"c1", "c2"};
    case ScenarioId::unicycle: return {"u", "v"};
    case ScenarioId::rel_unicycle: return {"u", "v"};
    case ScenarioId::su2_quantum: return {"phi1", "phi2"};
  }
  return {};
}

std::vector<std::string> family_variables(ScenarioId id, FamilyKind kind, int n_agents) {
  switch (kind) {
    case FamilyKind::exchangeable:
      return exchangeable_invariant_names(n_agents);
    case FamilyKind::raw_angle:
      return coordinate_names(ScenarioId::circle, n_agents);
    default:
      return invariant_names(id, n_agents);
  }
}

const CompiledExpr& DynamicsFamily::coefficient(int agent, int slot) const {
  int slots = int(slot_names_.size());
  if (family_shares_coefficients(kind_)) return coeffs_[slot];
  return coeffs_[std::size_t(agent) * slots + slot];
}

DynamicsFamily build_family(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::exchangeable:
    case FamilyKind::gradient:
    case FamilyKind::broken_translation:
      if (spec.scenario != ScenarioId::se2_plane)
        throw ConfigError(to_string(spec.kind) + " is a planar (se2_plane) family");
      break;
    case FamilyKind::raw_angle:
      if (spec.scenario != ScenarioId::circle)
        throw ConfigError("raw_angle is a circle family");
      break;
    case FamilyKind::lateral_slip:
      if (spec.scenario != ScenarioId::unicycle)
        throw ConfigError("lateral_slip is a unicycle family");
      break;
    case FamilyKind::standard:
      break;
  }
  if (spec.kind == FamilyKind::gradient && spec.n_agents != 2)
    throw ConfigError("the gradient family is formulated for 2 agents");
  if (spec.scenario == ScenarioId::su2_quantum && spec.n_agents != 1)
    throw ConfigError("su2_quantum stores the joint state as one agent block");
  if (!(spec.c > 0.0)) throw ConfigError("metric constant c must be positive");

  DynamicsFamily fam;
  fam.scenario_ = spec.scenario;
  fam.kind_ = spec.kind;
  fam.n_agents_ = spec.n_agents;
  fam.c_ = spec.c;
  fam.variables_ = family_variables(spec.scenario, spec.kind, spec.n_agents);
  fam.slot_names_ = family_slot_names(spec.scenario, spec.kind, spec.n_agents);
  if (fam.variables_.size() > 64)
    throw ConfigError("too many joint invariants for this agent count");

  const int slots = int(fam.slot_names_.size());
  if (int(spec.coefficients.size()) != slots)
    throw ConfigError("expected " + std::to_string(slots) + " coefficient slots (" +
                      [&] {
                        std::string s;
                        for (const auto& nm : fam.slot_names_) s += (s.empty() ? "" : ", ") + nm;
                        return s;
                      }() +
                      "), got " + std::to_string(spec.coefficients.size()));
  const bool shared = family_shares_coefficients(spec.kind);
  const int per_slot = shared ? 1 : spec.n_agents;
  for (int s = 0; s < slots; ++s) {
    if (int(spec.coefficients[s].size()) != per_slot)
      throw ConfigError("slot '" + fam.slot_names_[s] + "' needs " + std::to_string(per_slot) +
                        " expression(s), got " + std::to_string(spec.coefficients[s].size()));
  }
  if (shared) {
    for (int s = 0; s < slots; ++s)
      fam.coeffs_.push_back(parse_expression(spec.coefficients[s][0], fam.variables_));
  } else {
    for (int i = 0; i < spec.n_agents; ++i)
      for (int s = 0; s < slots; ++s)
        fam.coeffs_.push_back(parse_expression(spec.coefficients[s][i], fam.variables_));
  }
  return fam;
}

bool DynamicsFamily::eval(const Configuration& cfg, std::span<double> out,
                          std::string* why) const {
  if (cfg.scenario != scenario_ || cfg.n_agents != n_agents_)
    throw ConfigError("configuration does not match the family");
  const int n = n_agents_;
  const int slots = int(slot_names_.size());
  std::array<double, 64> buf;
  std::span<double> inv(buf.data(), variables_.size());

  if (kind_ == FamilyKind::raw_angle) {
    for (std::size_t k = 0; k < cfg.x.size(); ++k) buf[k] = cfg.x[k];
  } else if (kind_ != FamilyKind::exchangeable) {
    if (!frame_values(cfg, inv, why)) return false;
  }

  auto coeff = [&](int agent, int slot) {
    return coeffs_[std::size_t(agent) * slots + slot].eval(inv);
  };

  switch (scenario_) {
    case ScenarioId::se2_plane: {
      if (kind_ == FamilyKind::exchangeable) {
        double sx = 0.0, sy = 0.0;
        for (int j = 0; j < n; ++j) {
          sx += cfg.agent(j)[0];
          sy += cfg.agent(j)[1];
        }
        for (int i = 0; i < n; ++i) {
          if (!exchangeable_frame_values(cfg, i, inv, why)) return false;
          double lam = coeffs_[0].eval(inv), mu = coeffs_[1].eval(inv);
          double wx = sx - n * cfg.agent(i)[0];
          double wy = sy - n * cfg.agent(i)[1];
          out[2 * i] = lam * wx - mu * wy;
          out[2 * i + 1] = lam * wy + mu * wx;
        }
        return true;
      }
      double zx = cfg.agent(1)[0] - cfg.agent(0)[0];
      double zy = cfg.agent(1)[1] - cfg.agent(0)[1];
      if (kind_ == FamilyKind::gradient) {
        double lam = coeffs_[0].eval(inv);
        out[0] = -lam * zx;
        out[1] = -lam * zy;
        out[2] = lam * zx;
        out[3] = lam * zy;
        return true;
      }
      for (int i = 0; i < n; ++i) {
        double lam = coeff(i, 0), mu = coeff(i, 1);
        out[2 * i] = lam * zx - mu * zy;
        out[2 * i + 1] = lam * zy + mu * zx;
      }
      if (kind_ == FamilyKind::broken_translation) out[0] += cfg.x[0];
      return true;
    }
    case ScenarioId::rel_line: {
      double zt = cfg.agent(1)[0] - cfg.agent(0)[0];
      double zx = cfg.agent(1)[1] - cfg.agent(0)[1];
      for (int i = 0; i < n; ++i) {
        double phi = coeff(i, 0), psi = coeff(i, 1);
        out[2 * i] = phi * zt + psi * zx / c_;
        out[2 * i + 1] = phi * zx + psi * c_ * zt;
      }
      return true;
    }
    case ScenarioId::rel_plane: {
      auto p1 = cfg.agent(0);
      auto p2 = cfg.agent(1);
      double z2[3] = {p2[0] - p1[0], p2[1] - p1[1], p2[2] - p1[2]};
      if (n == 2) {
        for (int i = 0; i < n; ++i) {
          double psi = coeff(i, 0);
          for (int k = 0; k < 3; ++k) out[3 * i + k] = psi * z2[k];
        }
        return true;
      }
      auto p3 = cfg.agent(2);
      double z3[3] = {p3[0] - p1[0], p3[1] - p1[1], p3[2] - p1[2]};
      for (int i = 0; i < n; ++i) {
        double phi = coeff(i, 0), psi = coeff(i, 1);
        for (int k = 0; k < 3; ++k) out[3 * i + k] = phi * z2[k] + psi * z3[k];
      }
      return true;
    }
    case ScenarioId::circle: {
      for (int i = 0; i < n; ++i) out[i] = coeff(i, 0);
      return true;
    }
    case ScenarioId::sphere_so3: {
      for (int i = 0; i < n; ++i) {
        int ra, rb;
        tangent_refs(i, n, ra, rb);
        std::array<double, 3> e1, e2;
        if (!unit_gradient(cfg.agent(i), cfg.agent(ra), e1))
          return fail(why, "agents " + std::to_string(i + 1) + " and " + std::to_string(ra + 1) +
                               " are coincident or antipodal");
        if (n == 2) {
          e2 = cross3(cfg.agent(i), e1);
        } else {
          if (!unit_gradient(cfg.agent(i), cfg.agent(rb), e2))
            return fail(why, "agents " + std::to_string(i + 1) + " and " +
                                 std::to_string(rb + 1) + " are coincident or antipodal");
          auto c = cross3(e1, e2);
          auto p = cfg.agent(i);
          if (std::fabs(c[0] * p[0] + c[1] * p[1] + c[2] * p[2]) < 1e-9)
            return fail(why, "tangent references of agent " + std::to_string(i + 1) +
                                 " are collinear");
        }
        double f1 = coeff(i, 0), f2 = coeff(i, 1);
        for (int k = 0; k < 3; ++k) out[3 * i + k] = f1 * e1[k] + f2 * e2[k];
      }
      return true;
    }
    case ScenarioId::sphere_so2_stereo: {
      for (int i = 0; i < n; ++i) {
        auto p = cfg.agent(i);
        double phi = coeff(i, 0), psi = coeff(i, 1);
        out[2 * i] = phi * p[0] - psi * p[1];
        out[2 * i + 1] = phi * p[1] + psi * p[0];
      }
      return true;
    }
    case ScenarioId::sl2_plane: {
      if (n == 1) {
        double alpha = coeff(0, 0);
        out[0] = alpha * cfg.agent(0)[0];
        out[1] = alpha * cfg.agent(0)[1];
        return true;
      }
      auto p1 = cfg.agent(0);
      auto p2 = cfg.agent(1);
      for (int i = 0; i < n; ++i) {
        double c1 = coeff(i, 0), c2 = coeff(i, 1);
        out[2 * i] = c1 * p1[0] + c2 * p2[0];
        out[2 * i + 1] = c1 * p1[1] + c2 * p2[1];
      }
      return true;
    }
    case ScenarioId::unicycle: {
      for (int i = 0; i < n; ++i) {
        auto p = cfg.agent(i);
        double u = coeff(i, 0), v = coeff(i, 1);
        double cth = std::cos(p[2]), sth = std::sin(p[2]);
        out[3 * i] = u * cth;
        out[3 * i + 1] = u * sth;
        out[3 * i + 2] = v;
        if (kind_ == FamilyKind::lateral_slip) {
          out[3 * i] += -0.3 * sth;
          out[3 * i + 1] += 0.3 * cth;
        }
      }
      return true;
    }
    case ScenarioId::rel_unicycle: {
      for (int i = 0; i < n; ++i) {
        auto p = cfg.agent(i);
        double a = inv[2 * i + 1];
        double u = coeff(i, 0), v = coeff(i, 1);
        double ca = std::cos(a), sa = std::sin(a);
        out[4 * i] = u * p[0] * ca;
        out[4 * i + 1] = u * p[1] * ca;
        out[4 * i + 2] = u * sa;
        out[4 * i + 3] = v;
      }
      return true;
    }
    case ScenarioId::su2_quantum: {
      C22 x = c22_from_span(cfg.agent(0));
      C22 s = symmetric_part(x);
      cplx a = antisymmetric_coefficient(x);
      C22 asym{0, -a, a, 0};
      double p1 = coeff(0, 0), p2 = coeff(0, 1);
      C22 f = cplx(0, p1) * s + cplx(0, p2) * asym;
      c22_to_span(f, out.subspan(0, 8));
      return true;
    }
  }
  return fail(why, "unknown scenario");
}

bool DynamicsFamily::in_domain(const Configuration& cfg, std::string* why) const {
  std::vector<double> scratch(cfg.x.size());
  return eval(cfg, scratch, why);
}

}  // namespace equidyn
