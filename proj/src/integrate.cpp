#include "equidyn/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "equidyn/invariants.hpp"

namespace equidyn {
namespace {

// Field evaluation with the optional unit-speed reparameterization.
bool field_at(const DynamicsFamily& fam, const Configuration& cfg, bool arclength,
              std::span<double> out, std::string* why) {
  if (!fam.eval(cfg, out, why)) return false;
  for (double v : out)
    if (!std::isfinite(v)) {
      if (why) *why = "field value is not finite";
      return false;
    }
  if (arclength) {
    double n = norm2(out);
    if (n < 1e-12) {
      if (why) *why = "field vanishes; arclength parameterization undefined";
      return false;
    }
    for (double& v : out) v /= n;
  }
  return true;
}

struct Stepper {
  const DynamicsFamily& fam;
  bool arclength;
  std::vector<double> k1, k2, k3, k4, k5, k6, scratch;
  Configuration tmp;

  Stepper(const DynamicsFamily& f, const Configuration& x0, bool arc)
      : fam(f), arclength(arc), tmp(x0) {
    std::size_t n = x0.x.size();
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &scratch}) v->assign(n, 0.0);
  }

  bool eval_at(const Configuration& base, std::span<const double> dir, double h,
               std::span<double> out, std::string* why) {
    for (std::size_t j = 0; j < base.x.size(); ++j) tmp.x[j] = base.x[j] + h * dir[j];
    return field_at(fam, tmp, arclength, out, why);
  }

  // Classic RK4 step; cur is advanced on success.
  bool rk4(Configuration& cur, double h, std::string* why) {
    std::size_t n = cur.x.size();
    if (!field_at(fam, cur, arclength, k1, why)) return false;
    if (!eval_at(cur, k1, 0.5 * h, k2, why)) return false;
    if (!eval_at(cur, k2, 0.5 * h, k3, why)) return false;
    if (!eval_at(cur, k3, h, k4, why)) return false;
    for (std::size_t j = 0; j < n; ++j)
      cur.x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    canonicalize(cur);
    return in_chart_domain(cur, why);
  }

  // Fehlberg 4(5) stage evaluation. On success writes the 5th order update
  // into `next` and returns the scaled error estimate; a negative return
  // signals a domain exit during the stages.
  double rkf45(const Configuration& cur, double h, std::vector<double>& next, double rtol,
               double atol, std::string* why) {
    std::size_t n = cur.x.size();
    if (!field_at(fam, cur, arclength, k1, why)) return -1.0;
    auto blend = [&](std::initializer_list<std::pair<const std::vector<double>*, double>> terms,
                     std::span<double> out, std::string* w) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (const auto& [vec, coef] : terms) acc += coef * (*vec)[j];
        scratch[j] = acc;
      }
      return eval_at(cur, scratch, h, out, w);
    };
    if (!blend({{&k1, 0.25}}, k2, why)) return -1.0;
    if (!blend({{&k1, 3.0 / 32}, {&k2, 9.0 / 32}}, k3, why)) return -1.0;
    if (!blend({{&k1, 1932.0 / 2197}, {&k2, -7200.0 / 2197}, {&k3, 7296.0 / 2197}}, k4, why))
      return -1.0;
    if (!blend({{&k1, 439.0 / 216}, {&k2, -8.0}, {&k3, 3680.0 / 513}, {&k4, -845.0 / 4104}},
               k5, why))
      return -1.0;
    if (!blend({{&k1, -8.0 / 27},
                {&k2, 2.0},
                {&k3, -3544.0 / 2565},
                {&k4, 1859.0 / 4104},
                {&k5, -11.0 / 40}},
               k6, why))
      return -1.0;
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double y4 = h * (25.0 / 216 * k1[j] + 1408.0 / 2565 * k3[j] + 2197.0 / 4104 * k4[j] -
                       0.2 * k5[j]);
      double y5 = h * (16.0 / 135 * k1[j] + 6656.0 / 12825 * k3[j] + 28561.0 / 56430 * k4[j] -
                       9.0 / 50 * k5[j] + 2.0 / 55 * k6[j]);
      next[j] = cur.x[j] + y5;
      double scale = atol + rtol * std::max(std::fabs(cur.x[j]), std::fabs(next[j]));
      err = std::max(err, std::fabs(y5 - y4) / scale);
    }
    return err;
  }
};

}  // namespace

IntegratorKind integrator_from_string(const std::string& s) {
  if (s == "rk4") return IntegratorKind::rk4;
  if (s == "rkf45") return IntegratorKind::rkf45;
  throw ConfigError("unknown integrator: " + s + " (expected rk4 or rkf45)");
}

std::string to_string(IntegratorKind k) {
  return k == IntegratorKind::rk4 ? "rk4" : "rkf45";
}

Trajectory integrate(const DynamicsFamily& fam, const Configuration& x0, double horizon,
                     const IntegratorOptions& opt) {
  if (opt.arclength && !isometric_action(fam.scenario()))
    throw ConfigError("arclength mode needs a norm-preserving action (se2_plane, circle, "
                      "sphere_so3, sphere_so2_stereo, unicycle, su2_quantum)");
  if (!(opt.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(horizon >= 0.0)) throw ConfigError("horizon must be nonnegative");

  Trajectory traj;
  Configuration cur = x0;
  canonicalize(cur);
  traj.times.push_back(0.0);
  traj.states.push_back(cur);  // the given state is part of the record even
                               // when it is rejected immediately below
  std::string why;
  if (!in_chart_domain(cur, &why) || !fam.in_domain(cur, &why)) {
    traj.domain_violation = true;
    traj.violation_reason = why;
    return traj;
  }

  double next_record = opt.record_every > 0.0 ? opt.record_every : 0.0;
  auto maybe_record = [&](double t, const Configuration& state, bool force) {
    if (force || opt.record_every <= 0.0 || t + 1e-12 >= next_record) {
      traj.times.push_back(t);
      traj.states.push_back(state);
      if (opt.record_every > 0.0)
        while (next_record <= t + 1e-12) next_record += opt.record_every;
    }
  };

  Stepper st(fam, cur, opt.arclength);
  double t = 0.0;

  if (opt.kind == IntegratorKind::rk4) {
    long steps = std::lround(std::ceil(horizon / opt.dt - 1e-9));
    for (long s = 0; s < steps; ++s) {
      double h = std::min(opt.dt, horizon - t);
      if (h <= 0.0) break;
      Configuration nxt = cur;
      if (!st.rk4(nxt, h, &why)) {
        traj.domain_violation = true;
        traj.violation_reason = why;
        traj.end_time = t;
        return traj;
      }
      cur = nxt;
      t += h;
      maybe_record(t, cur, s == steps - 1);
    }
    traj.end_time = t;
    return traj;
  }

  // rkf45 with the usual 0.9 * err^(-1/5) controller
  double h = std::min(opt.dt, opt.dt_max);
  std::vector<double> next(cur.x.size());
  const long kMaxIter = 20'000'000;
  for (long iter = 0; iter < kMaxIter && t < horizon - 1e-12; ++iter) {
    h = std::min(h, horizon - t);
    double err = st.rkf45(cur, h, next, opt.rtol, opt.atol, &why);
    if (err < 0.0) {
      if (h > opt.dt_min * 1.01) {
        h = std::max(opt.dt_min, 0.5 * h);
        continue;
      }
      traj.domain_violation = true;
      traj.violation_reason = why;
      traj.end_time = t;
      return traj;
    }
    if (err <= 1.0 || h <= opt.dt_min * 1.01) {
      cur.x = next;
      canonicalize(cur);
      if (!in_chart_domain(cur, &why)) {
        traj.domain_violation = true;
        traj.violation_reason = why;
        traj.end_time = t;
        return traj;
      }
      t += h;
      maybe_record(t, cur, t >= horizon - 1e-12);
    }
    double grow = (err <= 1e-300) ? 5.0 : 0.9 * std::pow(err, -0.2);
    h = std::clamp(h * std::clamp(grow, 0.2, 5.0), opt.dt_min, opt.dt_max);
  }
  traj.end_time = t;
  if (t < horizon - 1e-9) {
    traj.domain_violation = true;
    traj.violation_reason = "step limit reached before the horizon";
  }
  return traj;
}

bool flow_state(const DynamicsFamily& fam, Configuration& cfg, double horizon, double dt,
                std::string* why) {
  Stepper st(fam, cfg, false);
  double t = 0.0;
  while (t < horizon - 1e-12) {
    double h = std::min(dt, horizon - t);
    if (!st.rk4(cfg, h, why)) return false;
    t += h;
  }
  return true;
}

QuotientTrace quotient_observable(const Trajectory& traj) {
  QuotientTrace q;
  if (traj.states.empty()) return q;
  const Configuration& first = traj.states.front();
  q.names = invariant_names(first.scenario, first.n_agents);
  std::vector<double> vals(q.names.size());
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    if (!frame_values(traj.states[s], vals)) break;
    q.times.push_back(traj.times[s]);
    q.values.push_back(vals);
  }
  return q;
}

}  // namespace equidyn
