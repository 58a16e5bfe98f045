#include "equidyn/invariants.hpp"

#include <array>
#include <cmath>

#include "equidyn/takagi.hpp"

namespace equidyn {
namespace {

bool fail(std::string* reason, const std::string& msg) {
  if (reason) *reason = msg;
  return false;
}

double minkowski2(std::span<const double> a, std::span<const double> b, double c) {
  return c * c * a[0] * b[0] - a[1] * b[1];
}

double minkowski3(std::span<const double> a, std::span<const double> b, double c) {
  return c * c * a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
}

// Geodesic distance between unit vectors.
double sphere_distance(std::span<const double> p, std::span<const double> q) {
  double dot = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
  double cx = p[1] * q[2] - p[2] * q[1];
  double cy = p[2] * q[0] - p[0] * q[2];
  double cz = p[0] * q[1] - p[1] * q[0];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

}  // namespace

std::vector<std::string> invariant_names(ScenarioId id, int n) {
  std::vector<std::string> out;
  switch (id) {
    case ScenarioId::se2_plane:
      if (n < 2) throw ConfigError("se2_plane needs at least 2 agents");
      for (int j = 2; j <= n; ++j) out.push_back("rho" + std::to_string(j));
      for (int j = 3; j <= n; ++j) out.push_back("th" + std::to_string(j) + "2");
      break;
    case ScenarioId::rel_line:
      if (n < 2) throw ConfigError("rel_line needs at least 2 agents");
      if (n == 2) {
        out.push_back("r");
      } else {
        for (int i = 2; i <= n; ++i)
          for (int j = i; j <= n; ++j)
            out.push_back("q" + std::to_string(i) + std::to_string(j));
      }
      break;
    case ScenarioId::rel_plane:
      if (n != 2 && n != 3)
        throw ConfigError("the rel_plane family is classified for 2 or 3 agents");
      if (n == 2) {
        out.push_back("r");
      } else {
        out = {"q22", "q23", "q33"};
      }
      break;
    case ScenarioId::circle:
      for (int j = 2; j <= n; ++j) out.push_back("d" + std::to_string(j) + "1");
      break;
    case ScenarioId::sphere_so3:
      if (n < 2) throw ConfigError("sphere_so3 needs at least 2 agents");
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
          out.push_back("d" + std::to_string(i) + std::to_string(j));
      break;
    case ScenarioId::sphere_so2_stereo:
      for (int i = 1; i <= n; ++i) out.push_back("rho" + std::to_string(i));
      for (int j = 2; j <= n; ++j) out.push_back("d" + std::to_string(j) + "1");
      break;
    case ScenarioId::sl2_plane:
      if (n >= 2) out.push_back("w12");
      for (int i = 3; i <= n; ++i) {
        out.push_back("u" + std::to_string(i));
        out.push_back("v" + std::to_string(i));
      }
      break;
    case ScenarioId::unicycle:
      for (int j = 2; j <= n; ++j) out.push_back("rho" + std::to_string(j));
      for (int j = 2; j <= n; ++j) out.push_back("a" + std::to_string(j));
      for (int j = 2; j <= n; ++j) out.push_back("h" + std::to_string(j));
      break;
    case ScenarioId::rel_unicycle:
      for (int i = 1; i <= n; ++i) {
        out.push_back("r" + std::to_string(i));
        out.push_back("a" + std::to_string(i));
      }
      break;
    case ScenarioId::su2_quantum:
      out = {"omega", "delta1", "delta2", "rea", "ima"};
      break;
  }
  return out;
}

std::vector<double> invariant_periods(ScenarioId id, int n) {
  std::vector<double> p(invariant_names(id, n).size(), 0.0);
  switch (id) {
    case ScenarioId::se2_plane:
      for (int k = n - 1; k < int(p.size()); ++k) p[k] = kTwoPi;
      break;
    case ScenarioId::circle:
      for (double& v : p) v = kTwoPi;
      break;
    case ScenarioId::sphere_so2_stereo:
      for (int k = n; k < int(p.size()); ++k) p[k] = kTwoPi;
      break;
    case ScenarioId::unicycle:
      for (int k = n - 1; k < int(p.size()); ++k) p[k] = kTwoPi;
      break;
    case ScenarioId::rel_unicycle:
      for (int i = 0; i < n; ++i) p[2 * i + 1] = kTwoPi;
      break;
    case ScenarioId::su2_quantum:
      p[0] = kPi;  // factorization phase is only defined modulo pi
      break;
    default:
      break;
  }
  return p;
}

int invariant_count(ScenarioId id, int n) { return int(invariant_names(id, n).size()); }

bool frame_values(const Configuration& cfg, std::span<double> out, std::string* reason) {
  const int n = cfg.n_agents;
  switch (cfg.scenario) {
    case ScenarioId::se2_plane: {
      auto p1 = cfg.agent(0);
      double ang2 = 0.0;
      for (int j = 1; j < n; ++j) {
        auto pj = cfg.agent(j);
        double zx = pj[0] - p1[0], zy = pj[1] - p1[1];
        double rho = std::hypot(zx, zy);
        if (rho < 1e-12)
          return fail(reason, "agent " + std::to_string(j + 1) + " coincides with agent 1");
        out[j - 1] = rho;
        double ang = std::atan2(zy, zx);
        if (j == 1) ang2 = ang;
        else out[n - 1 + (j - 2)] = wrap_pm_pi(ang - ang2);
      }
      return true;
    }
    case ScenarioId::rel_line: {
      auto p1 = cfg.agent(0);
      if (n == 2) {
        double z[2] = {cfg.agent(1)[0] - p1[0], cfg.agent(1)[1] - p1[1]};
        double q = minkowski2(z, z, cfg.c);
        if (q <= 0.0) return fail(reason, "agents 1 and 2 are not timelike-separated");
        out[0] = std::sqrt(q);
        return true;
      }
      std::vector<std::array<double, 2>> z(n - 1);
      for (int j = 1; j < n; ++j) {
        auto pj = cfg.agent(j);
        z[j - 1] = {pj[0] - p1[0], pj[1] - p1[1]};
        if (minkowski2(z[j - 1], z[j - 1], cfg.c) <= 0.0)
          return fail(reason, "agent " + std::to_string(j + 1) +
                                  " is not timelike-separated from agent 1");
      }
      int k = 0;
      for (int i = 0; i < n - 1; ++i)
        for (int j = i; j < n - 1; ++j) out[k++] = minkowski2(z[i], z[j], cfg.c);
      return true;
    }
    case ScenarioId::rel_plane: {
      auto p1 = cfg.agent(0);
      std::vector<std::array<double, 3>> z(n - 1);
      for (int j = 1; j < n; ++j) {
        auto pj = cfg.agent(j);
        z[j - 1] = {pj[0] - p1[0], pj[1] - p1[1], pj[2] - p1[2]};
        if (minkowski3(z[j - 1], z[j - 1], cfg.c) <= 0.0)
          return fail(reason, "agent " + std::to_string(j + 1) +
                                  " is not timelike-separated from agent 1");
      }
      if (n == 2) {
        out[0] = std::sqrt(minkowski3(z[0], z[0], cfg.c));
        return true;
      }
      double q22 = minkowski3(z[0], z[0], cfg.c);
      double q23 = minkowski3(z[0], z[1], cfg.c);
      double q33 = minkowski3(z[1], z[1], cfg.c);
      if (q23 * q23 - q22 * q33 <= 1e-9 * (std::fabs(q22 * q33) + q23 * q23))
        return fail(reason, "relative positions of agents 2 and 3 are parallel");
      out[0] = q22;
      out[1] = q23;
      out[2] = q33;
      return true;
    }
    case ScenarioId::circle: {
      double th1 = cfg.agent(0)[0];
      for (int j = 1; j < n; ++j) out[j - 1] = wrap_pm_pi(cfg.agent(j)[0] - th1);
      return true;
    }
    case ScenarioId::sphere_so3: {
      int k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double d = sphere_distance(cfg.agent(i), cfg.agent(j));
          if (std::sin(d) < 1e-9)
            return fail(reason, "agents " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " are coincident or antipodal");
          out[k++] = d;
        }
      return true;
    }
    case ScenarioId::sphere_so2_stereo: {
      double ang1 = 0.0;
      for (int i = 0; i < n; ++i) {
        auto p = cfg.agent(i);
        double rho = std::hypot(p[0], p[1]);
        if (rho < 1e-12)
          return fail(reason, "agent " + std::to_string(i + 1) + " sits at the puncture");
        out[i] = rho;
        double ang = std::atan2(p[1], p[0]);
        if (i == 0) ang1 = ang;
        else out[n + i - 1] = wrap_pm_pi(ang - ang1);
      }
      return true;
    }
    case ScenarioId::sl2_plane: {
      if (n == 1) return true;
      auto p1 = cfg.agent(0);
      auto p2 = cfg.agent(1);
      double w12 = p1[0] * p2[1] - p1[1] * p2[0];
      if (std::fabs(w12) < 1e-12)
        return fail(reason, "agents 1 and 2 are linearly dependent");
      out[0] = w12;
      for (int i = 2; i < n; ++i) {
        auto p = cfg.agent(i);
        out[1 + 2 * (i - 2)] = (p[0] * p2[1] - p[1] * p2[0]) / w12;
        out[2 + 2 * (i - 2)] = (p1[0] * p[1] - p1[1] * p[0]) / w12;
      }
      return true;
    }
    case ScenarioId::unicycle: {
      auto p1 = cfg.agent(0);
      double th1 = p1[2];
      for (int j = 1; j < n; ++j) {
        auto pj = cfg.agent(j);
        double zx = pj[0] - p1[0], zy = pj[1] - p1[1];
        double rho = std::hypot(zx, zy);
        if (rho < 1e-12)
          return fail(reason, "agent " + std::to_string(j + 1) + " coincides with agent 1");
        out[j - 1] = rho;
        out[n - 1 + (j - 1)] = wrap_pm_pi(std::atan2(zy, zx) - th1);
        out[2 * (n - 1) + (j - 1)] = wrap_pm_pi(pj[2] - th1);
      }
      return true;
    }
    case ScenarioId::rel_unicycle: {
      for (int i = 0; i < n; ++i) {
        auto p = cfg.agent(i);
        double q = cfg.c * cfg.c * p[0] * p[0] - p[1] * p[1];
        if (q <= 0.0 || p[0] <= 0.0)
          return fail(reason, "agent " + std::to_string(i + 1) + " left the hyperbolic chart");
        out[2 * i] = std::sqrt(q);
        out[2 * i + 1] = wrap_pm_pi(p[3] - p[2]);
      }
      return true;
    }
    case ScenarioId::su2_quantum: {
      C22 x = c22_from_span(cfg.agent(0));
      TakagiFactorization t = takagi_symmetric(symmetric_part(x));
      if (t.residual > 1e-8 * std::max(1.0, x.max_abs()))
        return fail(reason, "symmetric-part factorization failed");
      // The factorization phase is unique only when the singular values are
      // distinct; the degenerate set is excluded from the frame's domain.
      if (t.delta1 - t.delta2 <= 1e-8 * (t.delta1 + t.delta2 + 1.0))
        return fail(reason, "symmetric-part singular values are degenerate");
      cplx a = antisymmetric_coefficient(x);
      out[0] = t.omega;
      out[1] = t.delta1;
      out[2] = t.delta2;
      out[3] = a.real();
      out[4] = a.imag();
      return true;
    }
  }
  return fail(reason, "unknown scenario");
}

InvariantFrame invariant_frame(const Configuration& cfg) {
  InvariantFrame f;
  f.names = invariant_names(cfg.scenario, cfg.n_agents);
  f.periods = invariant_periods(cfg.scenario, cfg.n_agents);
  f.values.assign(f.names.size(), 0.0);
  f.valid = frame_values(cfg, f.values, &f.reason);
  return f;
}

double frame_distance(ScenarioId id, int n, std::span<const double> a,
                      std::span<const double> b) {
  std::vector<double> periods = invariant_periods(id, n);
  double worst = 0.0;
  for (std::size_t k = 0; k < periods.size(); ++k) {
    double d = (periods[k] > 0.0) ? std::fabs(std::remainder(a[k] - b[k], periods[k]))
                                  : std::fabs(a[k] - b[k]);
    worst = std::max(worst, d);
  }
  return worst;
}

std::vector<std::string> exchangeable_invariant_names(int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n - 1; ++k) out.push_back("rho" + std::to_string(k));
  for (int k = 1; k <= n - 2; ++k) out.push_back("tau" + std::to_string(k));
  return out;
}

bool exchangeable_frame_values(const Configuration& cfg, int agent, std::span<double> out,
                               std::string* reason) {
  if (cfg.scenario != ScenarioId::se2_plane)
    throw ConfigError("the exchangeable family lives on se2_plane");
  const int n = cfg.n_agents;
  auto pi = cfg.agent(agent);
  double first_angle = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    auto pj = cfg.agent((agent + k) % n);
    double zx = pj[0] - pi[0], zy = pj[1] - pi[1];
    double rho = std::hypot(zx, zy);
    if (rho < 1e-12)
      return fail(reason, "agents " + std::to_string(agent + 1) + " and " +
                              std::to_string((agent + k) % n + 1) + " coincide");
    out[k - 1] = rho;
    double ang = std::atan2(zy, zx);
    if (k == 1) first_angle = ang;
    else out[n - 1 + (k - 2)] = wrap_pm_pi(ang - first_angle);
  }
  return true;
}

}  // namespace equidyn
