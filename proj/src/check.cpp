#include "equidyn/check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "equidyn/integrate.hpp"
#include "equidyn/invariants.hpp"
#include "equidyn/takagi.hpp"

namespace equidyn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  double res = 0.0;
  std::string detail;
  bool counted = true;  // false: sample was inconclusive (domain too small)
};

// Deterministic worst-case merge across the sample loop. Each sample draws
// from its own substream, so the parallel and serial paths visit identical
// data; ties resolve toward the smallest sample index. Inconclusive samples
// never carry the worst residual; their count is summed (order independent).
Outcome run_samples(int count, bool parallel, int* conclusive,
                    const std::function<Outcome(int)>& fn) {
  Outcome best;
  int best_idx = -1;
  int counted = 0;
  auto merge = [&](const Outcome& o, int idx) {
    if (o.counted) ++counted;
    if (o.counted && !best.counted) {
      best = o;
      best_idx = idx;
      return;
    }
    if (!o.counted && best.counted && best_idx != -1) return;
    bool take = best_idx == -1 || o.res > best.res || (o.res == best.res && idx < best_idx);
    if (take) {
      best = o;
      best_idx = idx;
    }
  };
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < count; ++s) {
      Outcome o = fn(s);
#pragma omp critical(equidyn_check_merge)
      merge(o, s);
    }
    if (conclusive) *conclusive = counted;
    return best;
  }
#else
  (void)parallel;
#endif
  for (int s = 0; s < count; ++s) merge(fn(s), s);
  if (conclusive) *conclusive = counted;
  return best;
}

std::string describe(const char* fmt, int a, int b = -1) {
  char buf[96];
  if (b >= 0) std::snprintf(buf, sizeof buf, fmt, a, b);
  else std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

double vec_max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

using FieldFn = std::function<bool(const Configuration&, std::span<double>, std::string*)>;

// Central-difference directional derivative of G along v.
bool dir_deriv(const FieldFn& g, const Configuration& x, std::span<const double> v,
               std::span<double> out, std::string* why) {
  double delta = 1e-5 * std::max(1.0, vec_max_abs(x.x)) / std::max(1.0, vec_max_abs(v));
  Configuration xp = x, xm = x;
  for (std::size_t j = 0; j < x.x.size(); ++j) {
    xp.x[j] += delta * v[j];
    xm.x[j] -= delta * v[j];
  }
  std::vector<double> fp(x.x.size()), fm(x.x.size());
  if (!g(xp, fp, why) || !g(xm, fm, why)) return false;
  for (std::size_t j = 0; j < x.x.size(); ++j) out[j] = (fp[j] - fm[j]) / (2.0 * delta);
  return true;
}

// Field bracket [A, B] = DB*A - DA*B evaluated numerically.
bool numeric_bracket(const FieldFn& a_fn, const FieldFn& b_fn, const Configuration& x,
                     std::span<const double> a_val, std::span<const double> b_val,
                     std::span<double> out, std::string* why) {
  std::vector<double> dba(x.x.size()), dab(x.x.size());
  if (!dir_deriv(b_fn, x, a_val, dba, why)) return false;
  if (!dir_deriv(a_fn, x, b_val, dab, why)) return false;
  for (std::size_t j = 0; j < x.x.size(); ++j) out[j] = dba[j] - dab[j];
  return true;
}

FieldFn family_fn(const DynamicsFamily& fam) {
  return [&fam](const Configuration& cfg, std::span<double> out, std::string* why) {
    return fam.eval(cfg, out, why);
  };
}

FieldFn generator_fn(ScenarioId id, int k) {
  return [id, k](const Configuration& cfg, std::span<double> out, std::string*) {
    std::vector<double> f = generator_field(id, k, cfg);
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j];
    return true;
  };
}

struct BracketRule {
  int a, b;
  std::vector<std::pair<int, double>> terms;  // bracket = sum coeff * l_k
};

std::vector<BracketRule> structure_table(ScenarioId id, double c) {
  switch (id) {
    case ScenarioId::se2_plane:
    case ScenarioId::unicycle:
      return {{0, 1, {}}, {0, 2, {{1, 1.0}}}, {1, 2, {{0, -1.0}}}};
    case ScenarioId::rel_line:
      return {{0, 1, {}}, {0, 2, {{1, c}}}, {1, 2, {{0, 1.0 / c}}}};
    case ScenarioId::rel_plane:
      return {{0, 1, {}},        {0, 2, {}},          {1, 2, {}},
              {0, 3, {{1, c}}},  {1, 3, {{0, 1.0 / c}}}, {2, 3, {}},
              {0, 4, {{2, c}}},  {1, 4, {}},          {2, 4, {{0, 1.0 / c}}},
              {0, 5, {}},        {1, 5, {{2, 1.0}}},  {2, 5, {{1, -1.0}}},
              {3, 4, {{5, 1.0}}}, {3, 5, {{4, 1.0}}}, {4, 5, {{3, -1.0}}}};
    case ScenarioId::sphere_so3:
      return {{0, 1, {{2, -1.0}}}, {1, 2, {{0, -1.0}}}, {0, 2, {{1, 1.0}}}};
    case ScenarioId::sl2_plane:
      return {{0, 1, {{2, -1.0}}}, {0, 2, {{0, 2.0}}}, {1, 2, {{1, -2.0}}}};
    case ScenarioId::rel_unicycle:
      return {{0, 1, {}}};
    case ScenarioId::su2_quantum:
      return {{0, 1, {{2, -2.0}}}, {1, 2, {{0, -2.0}}}, {0, 2, {{1, 2.0}}}};
    default:
      return {};
  }
}

std::array<double, 3> cross3(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

void random_unit3(Rng& rng, std::span<double> out) {
  double n = 0.0;
  do {
    for (int k = 0; k < 3; ++k) out[k] = rng.normal();
    n = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
  } while (n < 1e-6);
  for (int k = 0; k < 3; ++k) out[k] /= n;
}

bool pairwise_separated(const Configuration& cfg, int coords, double margin) {
  for (int i = 0; i < cfg.n_agents; ++i)
    for (int j = i + 1; j < cfg.n_agents; ++j) {
      double d2 = 0.0;
      for (int k = 0; k < coords; ++k) d2 += sqr(cfg.agent(i)[k] - cfg.agent(j)[k]);
      if (d2 < margin * margin) return false;
    }
  return true;
}

}  // namespace

Configuration sample_configuration(ScenarioId id, int n, double c, Rng& rng) {
  const int d = dim_per_agent(id);
  for (int attempt = 0; attempt < 5000; ++attempt) {
    std::vector<double> x(std::size_t(n) * d, 0.0);
    switch (id) {
      case ScenarioId::se2_plane:
        for (double& v : x) v = rng.uniform(-3.0, 3.0);
        break;
      case ScenarioId::rel_line: {
        x[0] = rng.uniform(-1.0, 1.0);
        x[1] = rng.uniform(-1.0, 1.0);
        for (int j = 1; j < n; ++j) {
          double dt = rng.uniform(0.5, 3.0);
          x[2 * j] = x[0] + dt;
          x[2 * j + 1] = x[1] + rng.uniform(-0.8, 0.8) * c * dt;
        }
        break;
      }
      case ScenarioId::rel_plane: {
        for (int k = 0; k < 3; ++k) x[k] = rng.uniform(-1.0, 1.0);
        for (int j = 1; j < n; ++j) {
          double dt = rng.uniform(0.5, 3.0);
          double mag = rng.uniform(0.2, 0.8) * c * dt;
          double ang = rng.angle();
          x[3 * j] = x[0] + dt;
          x[3 * j + 1] = x[1] + mag * std::cos(ang);
          x[3 * j + 2] = x[2] + mag * std::sin(ang);
        }
        break;
      }
      case ScenarioId::circle:
        for (double& v : x) v = rng.angle();
        break;
      case ScenarioId::sphere_so3:
        for (int i = 0; i < n; ++i) random_unit3(rng, std::span<double>(x).subspan(3 * i, 3));
        break;
      case ScenarioId::sphere_so2_stereo:
        for (int i = 0; i < n; ++i) {
          double rho = rng.uniform(0.3, 3.0), ang = rng.angle();
          x[2 * i] = rho * std::cos(ang);
          x[2 * i + 1] = rho * std::sin(ang);
        }
        break;
      case ScenarioId::sl2_plane:
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        break;
      case ScenarioId::unicycle:
        for (int i = 0; i < n; ++i) {
          x[3 * i] = rng.uniform(-3.0, 3.0);
          x[3 * i + 1] = rng.uniform(-3.0, 3.0);
          x[3 * i + 2] = rng.angle();
        }
        break;
      case ScenarioId::rel_unicycle:
        for (int i = 0; i < n; ++i) {
          double t = rng.uniform(2.5, 4.0);
          x[4 * i] = t;
          x[4 * i + 1] = rng.uniform(0.3, 0.7) * c * t;
          x[4 * i + 2] = rng.angle();
          x[4 * i + 3] = rng.angle();
        }
        break;
      case ScenarioId::su2_quantum:
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        break;
    }

    Configuration cfg = make_configuration(id, n, std::move(x), c);

    bool ok = true;
    switch (id) {
      case ScenarioId::se2_plane:
        ok = pairwise_separated(cfg, 2, 0.3);
        break;
      case ScenarioId::unicycle:
        ok = pairwise_separated(cfg, 2, 0.3);
        break;
      case ScenarioId::sphere_so3: {
        for (int i = 0; ok && i < n; ++i)
          for (int j = i + 1; ok && j < n; ++j) {
            auto cr = cross3(cfg.agent(i), cfg.agent(j));
            if (std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]) < 0.3) ok = false;
          }
        // keep the per-agent tangent references clearly independent
        if (ok && n >= 3) {
          for (int i = 0; ok && i < std::min(n, 3); ++i) {
            auto pi = cfg.agent(i);
            int ra = (i == 0) ? 1 : 0;
            int rb = (i == 2) ? 1 : 2;
            auto ha = cross3(pi, cfg.agent(ra));
            auto hb = cross3(pi, cfg.agent(rb));
            auto cr = cross3(ha, hb);
            double trip = cr[0] * pi[0] + cr[1] * pi[1] + cr[2] * pi[2];
            double na = std::sqrt(ha[0] * ha[0] + ha[1] * ha[1] + ha[2] * ha[2]);
            double nb = std::sqrt(hb[0] * hb[0] + hb[1] * hb[1] + hb[2] * hb[2]);
            if (std::fabs(trip) < 0.1 * na * nb) ok = false;
          }
        }
        break;
      }
      case ScenarioId::sl2_plane: {
        for (int i = 0; ok && i < n; ++i)
          if (std::hypot(cfg.agent(i)[0], cfg.agent(i)[1]) < 0.3) ok = false;
        if (ok && n >= 2) {
          auto p1 = cfg.agent(0);
          auto p2 = cfg.agent(1);
          if (std::fabs(p1[0] * p2[1] - p1[1] * p2[0]) < 0.3) ok = false;
        }
        break;
      }
      case ScenarioId::rel_plane: {
        if (n == 3) {
          std::vector<double> inv(3);
          if (!frame_values(cfg, inv)) {
            ok = false;
            break;
          }
          if (inv[1] * inv[1] < 1.1 * inv[0] * inv[2]) ok = false;
        }
        break;
      }
      case ScenarioId::su2_quantum: {
        C22 xm = c22_from_span(cfg.agent(0));
        TakagiFactorization t = takagi_symmetric(symmetric_part(xm));
        if (t.delta1 - t.delta2 < 0.1 || t.residual > 1e-9 * std::max(1.0, xm.max_abs()))
          ok = false;
        break;
      }
      default:
        break;
    }
    if (ok) return cfg;
  }
  throw std::runtime_error("configuration sampler failed to find a point with margins");
}

std::string to_string(CheckId id) {
  switch (id) {
    case CheckId::generator_commutation: return "generator_commutation";
    case CheckId::flow_equivariance: return "flow_equivariance";
    case CheckId::frame_invariance: return "frame_invariance";
    case CheckId::chart_consistency: return "chart_consistency";
    case CheckId::structure_constants: return "structure_constants";
    case CheckId::rolling_constraint: return "rolling_constraint";
    case CheckId::permutation_equivariance: return "permutation_equivariance";
    case CheckId::norm_conservation: return "norm_conservation";
  }
  return "?";
}

CheckId check_id_from_string(const std::string& s) {
  static const CheckId all[] = {
      CheckId::generator_commutation,    CheckId::flow_equivariance,
      CheckId::frame_invariance,         CheckId::chart_consistency,
      CheckId::structure_constants,      CheckId::rolling_constraint,
      CheckId::permutation_equivariance, CheckId::norm_conservation};
  for (CheckId id : all)
    if (to_string(id) == s) return id;
  std::string names;
  for (CheckId id : all) {
    if (!names.empty()) names += ", ";
    names += to_string(id);
  }
  throw ConfigError("unknown check '" + s + "' (expected one of: " + names + ")");
}

std::vector<CheckResult> run_checks(const DynamicsFamily& fam, const CheckOptions& opt) {
  const ScenarioId id = fam.scenario();
  const int n = fam.n_agents();
  const double c = fam.c();
  const int dim = fam.dim();
  const int gens = generator_count(id);
  FieldFn field = family_fn(fam);

  auto stream = [&](CheckId cid, int s) {
    return substream(opt.seed + 1000003ull * (std::uint64_t(cid) + 1), std::uint64_t(s));
  };
  auto want = [&](CheckId cid) {
    if (opt.only.empty()) return true;
    return std::find(opt.only.begin(), opt.only.end(), cid) != opt.only.end();
  };
  auto tol = [&](CheckId cid, double fallback) {
    for (const auto& [k, v] : opt.tolerances)
      if (k == cid) fallback = v;
    return fallback;
  };

  std::vector<CheckResult> results;

  if (want(CheckId::generator_commutation)) {  // [F, l_k] = 0
    CheckResult r;
    r.id = CheckId::generator_commutation;
    r.tolerance = tol(r.id, 1e-4);
    Outcome o = run_samples(opt.samples, opt.parallel, &r.samples, [&](int s) -> Outcome {
      Rng rng = stream(CheckId::generator_commutation, s);
      Configuration x = sample_configuration(id, n, c, rng);
      std::vector<double> fx(dim), lx(dim), br(dim);
      std::string why;
      if (!fam.eval(x, fx, &why)) return {kInf, "field undefined at sample: " + why};
      Outcome worst;
      for (int k = 0; k < gens; ++k) {
        std::vector<double> lraw = generator_field(id, k, x);
        for (int j = 0; j < dim; ++j) lx[j] = lraw[j];
        if (!numeric_bracket(field, generator_fn(id, k), x, fx, lx, br, &why))
          return {kInf, "field undefined near sample: " + why};
        double res = vec_max_abs(br) / (1.0 + vec_max_abs(fx) + vec_max_abs(lx));
        if (res >= worst.res)
          worst = {res, describe("sample %d, generator %d", s, k)};
      }
      return worst;
    });
    r.worst = o.res;
    r.detail = o.detail;
    r.passed = r.worst <= r.tolerance;
    results.push_back(std::move(r));
  }

  if (want(CheckId::flow_equivariance)) {  // act(g, flow(x)) = flow(act(g, x))
    CheckResult r;
    r.id = CheckId::flow_equivariance;
    r.tolerance = tol(r.id, 1e-6);
    Outcome o = run_samples(opt.samples, opt.parallel, &r.samples, [&](int s) -> Outcome {
      Rng rng = stream(CheckId::flow_equivariance, s);
      Configuration x = sample_configuration(id, n, c, rng);
      std::vector<GroupElement> gs;
      gs.reserve(std::size_t(opt.group_elements));
      for (int e = 0; e < opt.group_elements; ++e) gs.push_back(random_element(id, rng, c));
      // When a trajectory leaves the domain the horizon is halved a few
      // times; a sample that never fits is inconclusive rather than a fail.
      std::string why;
      double t = opt.flow_time;
      for (int attempt = 0; attempt < 5; ++attempt, t *= 0.5) {
        Configuration y = x;
        if (!flow_state(fam, y, t, opt.flow_dt, &why)) continue;
        Outcome worst;
        bool fits = true;
        for (int e = 0; fits && e < opt.group_elements; ++e) {
          try {
            Configuration gx = act(gs[std::size_t(e)], x);
            if (!flow_state(fam, gx, t, opt.flow_dt, &why)) {
              fits = false;
              break;
            }
            Configuration gy = act(gs[std::size_t(e)], y);
            double res = config_distance(gy, gx) / (1.0 + vec_max_abs(gy.x));
            if (res >= worst.res) worst = {res, describe("sample %d, element %d", s, e)};
          } catch (const DomainError& ex) {
            why = std::string("group action left the chart: ") + ex.what();
            return {0.0, "sample " + std::to_string(s) + " skipped: " + why, false};
          }
        }
        if (fits) return worst;
      }
      return {0.0,
              "sample " + std::to_string(s) + " skipped: flow left the domain: " + why,
              false};
    });
    r.worst = o.res;
    r.detail = o.detail;
    r.passed = r.worst <= r.tolerance;
    results.push_back(std::move(r));
  }

  if (want(CheckId::frame_invariance)) {  // invariants constant along orbits
    CheckResult r;
    r.id = CheckId::frame_invariance;
    r.tolerance = tol(r.id, 1e-9);
    const int m = invariant_count(id, n);
    Outcome o = run_samples(opt.samples, opt.parallel, &r.samples, [&](int s) -> Outcome {
      Rng rng = stream(CheckId::frame_invariance, s);
      Configuration x = sample_configuration(id, n, c, rng);
      std::vector<double> fr(m), fra(m);
      std::string why;
      if (!frame_values(x, fr, &why)) return {kInf, "frame undefined at sample: " + why};
      double scale = 1.0 + vec_max_abs(fr);
      Outcome worst;
      for (int e = 0; e < opt.group_elements; ++e) {
        GroupElement g = random_element(id, rng, c);
        try {
          Configuration xa = act(g, x);
          if (!frame_values(xa, fra, &why))
            return {kInf, "frame degenerated along the orbit: " + why};
          double res = frame_distance(id, n, fr, fra) / scale;
          if (res >= worst.res) worst = {res, describe("sample %d, element %d", s, e)};
        } catch (const DomainError& ex) {
          return {kInf, std::string("group action left the chart: ") + ex.what()};
        }
      }
      return worst;
    });
    r.worst = o.res;
    r.detail = o.detail;
    r.passed = r.worst <= r.tolerance;
    results.push_back(std::move(r));
  }

  if (want(CheckId::chart_consistency)) {  // 2pi-periodicity in every angle coordinate
    CheckResult r;
    r.id = CheckId::chart_consistency;
    r.tolerance = tol(r.id, 1e-9);
    const int d = dim_per_agent(id);
    std::vector<int> angle_coords;
    for (int k = 0; k < d; ++k)
      if (is_angle_coord(id, k)) angle_coords.push_back(k);
    if (angle_coords.empty()) {
      r.applicable = false;
      results.push_back(std::move(r));
    } else {
      const int probes = std::min(16, opt.samples);
      Outcome o = run_samples(probes, opt.parallel, &r.samples, [&](int s) -> Outcome {
        Rng rng = stream(CheckId::chart_consistency, s);
        Configuration x = sample_configuration(id, n, c, rng);
        std::vector<double> fx(dim), fs(dim);
        std::string why;
        if (!fam.eval(x, fx, &why)) return {kInf, "field undefined at sample: " + why};
        Outcome worst;
        for (int i = 0; i < n; ++i)
          for (int k : angle_coords) {
            Configuration xs = x;
            xs.agent(i)[k] += kTwoPi;
            if (!fam.eval(xs, fs, &why))
              return {kInf, "field undefined after angle shift: " + why};
            double res = 0.0;
            for (int j = 0; j < dim; ++j) res = std::max(res, std::fabs(fs[j] - fx[j]));
            res /= 1.0 + vec_max_abs(fx);
            if (res >= worst.res) worst = {res, describe("sample %d, agent %d", s, i)};
          }
        return worst;
      });
      r.worst = o.res;
      r.detail = o.detail;
      r.passed = r.worst <= r.tolerance;
      results.push_back(std::move(r));
    }
  }

  if (want(CheckId::structure_constants)) {  // generator brackets match the algebra table
    CheckResult r;
    r.id = CheckId::structure_constants;
    r.tolerance = tol(r.id, 1e-4);
    if (gens < 2) {
      r.applicable = false;
      results.push_back(std::move(r));
    } else {
      auto table = structure_table(id, c);
      Outcome o = run_samples(opt.samples, opt.parallel, &r.samples, [&](int s) -> Outcome {
        Rng rng = stream(CheckId::structure_constants, s);
        Configuration x = sample_configuration(id, n, c, rng);
        std::vector<double> la(dim), lb(dim), br(dim), expect(dim);
        std::string why;
        Outcome worst;
        for (const auto& rule : table) {
          std::vector<double> lav = generator_field(id, rule.a, x);
          std::vector<double> lbv = generator_field(id, rule.b, x);
          for (int j = 0; j < dim; ++j) {
            la[j] = lav[j];
            lb[j] = lbv[j];
          }
          if (!numeric_bracket(generator_fn(id, rule.a), generator_fn(id, rule.b), x, la, lb,
                               br, &why))
            return {kInf, "generator field undefined: " + why};
          std::fill(expect.begin(), expect.end(), 0.0);
          for (const auto& [k, coeff] : rule.terms) {
            std::vector<double> lk = generator_field(id, k, x);
            for (int j = 0; j < dim; ++j) expect[j] += coeff * lk[j];
          }
          double res = 0.0;
          for (int j = 0; j < dim; ++j) res = std::max(res, std::fabs(br[j] - expect[j]));
          res /= 1.0 + vec_max_abs(la) + vec_max_abs(lb);
          if (res >= worst.res)
            worst = {res, describe("sample %d, pair (%d", s, rule.a) + "," +
                              std::to_string(rule.b) + ")"};
        }
        return worst;
      });
      r.worst = o.res;
      r.detail = o.detail;
      r.passed = r.worst <= r.tolerance;
      results.push_back(std::move(r));
    }
  }

  if (want(CheckId::rolling_constraint)) {  // velocity stays in the heading/steering span
    CheckResult r;
    r.id = CheckId::rolling_constraint;
    r.tolerance = tol(r.id, 1e-12);
    if (!fam.has_rolling_constraint()) {
      r.applicable = false;
      results.push_back(std::move(r));
    } else {
      Outcome o = run_samples(opt.samples, opt.parallel, &r.samples, [&](int s) -> Outcome {
        Rng rng = stream(CheckId::rolling_constraint, s);
        Configuration x = sample_configuration(id, n, c, rng);
        std::vector<double> fx(dim);
        std::string why;
        if (!fam.eval(x, fx, &why)) return {kInf, "field undefined at sample: " + why};
        double fscale = 1.0 + vec_max_abs(fx);
        double xscale = 1.0 + vec_max_abs(x.x);
        Outcome worst;
        for (int i = 0; i < n; ++i) {
          double res = 0.0;
          if (id == ScenarioId::unicycle) {
            auto p = x.agent(i);
            double lat = -std::sin(p[2]) * fx[3 * i] + std::cos(p[2]) * fx[3 * i + 1];
            res = std::fabs(lat) / fscale;
          } else {
            auto p = x.agent(i);
            double a = wrap_pm_pi(p[3] - p[2]);
            double radial = fx[4 * i] * p[1] - fx[4 * i + 1] * p[0];
            double steer = fx[4 * i + 1] * std::sin(a) - fx[4 * i + 2] * p[1] * std::cos(a);
            res = std::max(std::fabs(radial), std::fabs(steer)) / (fscale * xscale);
          }
          if (res >= worst.res) worst = {res, describe("sample %d, agent %d", s, i)};
        }
        return worst;
      });
      r.worst = o.res;
      r.detail = o.detail;
      r.passed = r.worst <= r.tolerance;
      results.push_back(std::move(r));
    }
  }

  if (want(CheckId::permutation_equivariance)) {  // relabeling commutes with the field
    CheckResult r;
    r.id = CheckId::permutation_equivariance;
    r.tolerance = tol(r.id, 1e-10);
    if (!fam.permutation_equivariant() || n < 2) {
      r.applicable = false;
      results.push_back(std::move(r));
    } else {
      const int d = dim_per_agent(id);
      Outcome o = run_samples(opt.samples, opt.parallel, &r.samples, [&](int s) -> Outcome {
        Rng rng = stream(CheckId::permutation_equivariance, s);
        Configuration x = sample_configuration(id, n, c, rng);
        std::vector<double> fx(dim), fp(dim);
        std::string why;
        if (!fam.eval(x, fx, &why)) return {kInf, "field undefined at sample: " + why};
        double scale = 1.0 + vec_max_abs(fx);
        Outcome worst;
        std::vector<int> src(n);
        for (int e = 0; e < opt.group_elements; ++e) {
          for (int i = 0; i < n; ++i) src[i] = i;
          for (int i = n - 1; i > 0; --i) std::swap(src[i], src[rng.index(i + 1)]);
          Configuration xp = x;
          for (int i = 0; i < n; ++i)
            for (int k = 0; k < d; ++k) xp.agent(i)[k] = x.agent(src[i])[k];
          if (!fam.eval(xp, fp, &why))
            return {kInf, "field undefined after relabeling: " + why};
          double res = 0.0;
          for (int i = 0; i < n; ++i)
            for (int k = 0; k < d; ++k)
              res = std::max(res, std::fabs(fp[i * d + k] - fx[src[i] * d + k]));
          res /= scale;
          if (res >= worst.res) worst = {res, describe("sample %d, relabeling %d", s, e)};
        }
        return worst;
      });
      r.worst = o.res;
      r.detail = o.detail;
      r.passed = r.worst <= r.tolerance;
      results.push_back(std::move(r));
    }
  }

  if (want(CheckId::norm_conservation)) {
    // The quantum action is unitary, so the Frobenius norm of the state must
    // not drift along trajectories. On the other isometric charts the claim
    // is structural instead: ||F||^2 is itself a joint invariant, which is
    // what licenses the arclength reparameterization.
    CheckResult r;
    r.id = CheckId::norm_conservation;
    const bool quantum = id == ScenarioId::su2_quantum;
    r.tolerance = tol(r.id, quantum ? 1e-8 : 1e-5);
    if (!isometric_action(id)) {
      r.applicable = false;
      results.push_back(std::move(r));
    } else {
      Outcome o = run_samples(opt.samples, opt.parallel, &r.samples, [&](int s) -> Outcome {
        Rng rng = stream(CheckId::norm_conservation, s);
        Configuration x = sample_configuration(id, n, c, rng);
        std::string why;
        if (quantum) {
          double n0 = norm2(x.x);
          Configuration y = x;
          if (!flow_state(fam, y, opt.flow_time, opt.flow_dt, &why))
            return {0.0, "sample " + std::to_string(s) + " skipped: " + why, false};
          double res = std::fabs(norm2(y.x) - n0) / (1.0 + n0);
          return {res, describe("sample %d", s)};
        }
        std::vector<double> fx(dim), fg(dim);
        if (!fam.eval(x, fx, &why)) return {kInf, "field undefined at sample: " + why};
        double base = norm2(fx);
        Outcome worst;
        for (int e = 0; e < opt.group_elements; ++e) {
          GroupElement g = random_element(id, rng, c);
          try {
            Configuration xg = act(g, x);
            if (!fam.eval(xg, fg, &why))
              return {kInf, "field undefined along the orbit: " + why};
            double res = std::fabs(norm2(fg) - base) / (1.0 + base);
            if (res >= worst.res) worst = {res, describe("sample %d, element %d", s, e)};
          } catch (const DomainError& ex) {
            return {0.0,
                    "sample " + std::to_string(s) +
                        " skipped: group action left the chart: " + ex.what(),
                    false};
          }
        }
        return worst;
      });
      r.worst = o.res;
      r.detail = o.detail;
      r.passed = r.worst <= r.tolerance;
      results.push_back(std::move(r));
    }
  }

  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (r.applicable && !r.passed) return false;
  return true;
}

std::string format_report(const DynamicsFamily& fam, const CheckOptions& opt,
                          const std::vector<CheckResult>& results) {
  char line[256];
  std::string out = "family check report\n";
  std::snprintf(line, sizeof line, "scenario: %s   agents: %d   family: %s   c: %g\n",
                to_string(fam.scenario()).c_str(), fam.n_agents(),
                to_string(fam.kind()).c_str(), fam.c());
  out += line;
  std::snprintf(line, sizeof line,
                "seed: %llu   samples: %d   group elements: %d   flow: t=%g dt=%g\n\n",
                static_cast<unsigned long long>(opt.seed), opt.samples, opt.group_elements,
                opt.flow_time, opt.flow_dt);
  out += line;
  std::snprintf(line, sizeof line, "%-26s %-8s %-12s %-12s %s\n", "check", "status", "worst",
                "tolerance", "samples");
  out += line;
  bool any_inconclusive = false;
  for (const auto& r : results) {
    if (!r.applicable) {
      std::snprintf(line, sizeof line, "%-26s %s\n", to_string(r.id).c_str(),
                    "not applicable");
      out += line;
      continue;
    }
    if (is_inconclusive(r)) {
      any_inconclusive = true;
      std::snprintf(line, sizeof line, "%-26s %s\n", to_string(r.id).c_str(),
                    "inconclusive");
      out += line;
      if (!r.detail.empty()) out += "    last skip: " + r.detail + "\n";
      continue;
    }
    std::snprintf(line, sizeof line, "%-26s %-8s %-12.3e %-12.1e %d\n",
                  to_string(r.id).c_str(), r.passed ? "PASS" : "FAIL", r.worst, r.tolerance,
                  r.samples);
    out += line;
    if (!r.passed && !r.detail.empty()) out += "    worst case: " + r.detail + "\n";
  }
  out += "\noverall: ";
  out += !all_passed(results) ? "FAIL" : (any_inconclusive ? "INCONCLUSIVE" : "PASS");
  out += "\n";
  return out;
}

}  // namespace equidyn
