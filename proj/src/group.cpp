#include "equidyn/group.hpp"

#include <cmath>

#include "equidyn/c2.hpp"

namespace equidyn {
namespace {

using Mat3 = std::array<double, 9>;
using Mat2 = std::array<double, 4>;

Mat3 ident3() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Mat3 mul3(const Mat3& p, const Mat3& q) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[3 * i + j] += p[3 * i + k] * q[3 * k + j];
  return r;
}

void apply3(const Mat3& m, std::span<const double> in, std::span<double> out) {
  for (int i = 0; i < 3; ++i)
    out[i] = m[3 * i] * in[0] + m[3 * i + 1] * in[1] + m[3 * i + 2] * in[2];
}

Mat2 mul2(const Mat2& p, const Mat2& q) {
  return {p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
          p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]};
}

// Boost with rapidity t on (T, x), metric c^2 T^2 - x^2.
Mat2 boost2(double t, double c) {
  return {std::cosh(t), std::sinh(t) / c, c * std::sinh(t), std::cosh(t)};
}

// Boosts of R^{1,2} in the (T,x) and (T,y) planes, rotation in the (x,y) plane.
Mat3 boost3_x(double t, double c) {
  return {std::cosh(t), std::sinh(t) / c, 0, c * std::sinh(t), std::cosh(t), 0, 0, 0, 1};
}
Mat3 boost3_y(double t, double c) {
  return {std::cosh(t), 0, std::sinh(t) / c, 0, 1, 0, c * std::sinh(t), 0, std::cosh(t)};
}
Mat3 rot3_xy(double t) {
  double cs = std::cos(t), sn = std::sin(t);
  return {1, 0, 0, 0, cs, -sn, 0, sn, cs};
}

Mat3 rodrigues(const std::array<double, 3>& axis, double angle) {
  double cs = std::cos(angle), sn = std::sin(angle);
  const auto [x, y, z] = axis;
  Mat3 k = {0, -z, y, z, 0, -x, -y, x, 0};
  Mat3 k2 = mul3(k, k);
  Mat3 r = ident3();
  for (int i = 0; i < 9; ++i) r[i] += sn * k[i] + (1.0 - cs) * k2[i];
  return r;
}

void rotate2(double tau, double& x, double& y) {
  double cs = std::cos(tau), sn = std::sin(tau);
  double nx = cs * x - sn * y;
  double ny = sn * x + cs * y;
  x = nx;
  y = ny;
}

Mat3 mat3_of(const GroupElement& g) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m[i] = g.a[i];
  return m;
}

double det4(const std::array<double, 16>& m) {
  double det = 0.0;
  for (int col = 0; col < 4; ++col) {
    double minor[9];
    int idx = 0;
    for (int r = 1; r < 4; ++r)
      for (int cc = 0; cc < 4; ++cc)
        if (cc != col) minor[idx++] = m[4 * r + cc];
    double d3 = minor[0] * (minor[4] * minor[8] - minor[5] * minor[7]) -
                minor[1] * (minor[3] * minor[8] - minor[5] * minor[6]) +
                minor[2] * (minor[3] * minor[7] - minor[4] * minor[6]);
    det += ((col % 2 == 0) ? 1.0 : -1.0) * m[col] * d3;
  }
  return det;
}

}  // namespace

GroupElement identity_element(ScenarioId id, double c) {
  GroupElement g;
  g.scenario = id;
  g.c = c;
  switch (id) {
    case ScenarioId::rel_plane:
    case ScenarioId::sphere_so3:
      g.a[0] = g.a[4] = g.a[8] = 1.0;
      break;
    case ScenarioId::sl2_plane:
      g.a[0] = g.a[3] = 1.0;
      break;
    case ScenarioId::su2_quantum:
      g.a[0] = g.a[6] = 1.0;  // re g00 = re g11 = 1
      break;
    default:
      break;
  }
  return g;
}

GroupElement random_element(ScenarioId id, Rng& rng, double c) {
  GroupElement g = identity_element(id, c);
  switch (id) {
    case ScenarioId::se2_plane:
    case ScenarioId::unicycle:
      g.a[0] = rng.angle();
      g.a[1] = rng.uniform(-2.0, 2.0);
      g.a[2] = rng.uniform(-2.0, 2.0);
      break;
    case ScenarioId::rel_line:
      g.a[0] = rng.uniform(-1.0, 1.0);
      g.a[1] = rng.uniform(-2.0, 2.0);
      g.a[2] = rng.uniform(-2.0, 2.0);
      break;
    case ScenarioId::rel_plane: {
      Mat3 m = mul3(boost3_x(rng.uniform(-0.8, 0.8), c),
                    mul3(boost3_y(rng.uniform(-0.8, 0.8), c), rot3_xy(rng.angle())));
      for (int i = 0; i < 9; ++i) g.a[i] = m[i];
      g.a[9] = rng.uniform(-2.0, 2.0);
      g.a[10] = rng.uniform(-2.0, 2.0);
      g.a[11] = rng.uniform(-2.0, 2.0);
      break;
    }
    case ScenarioId::circle:
    case ScenarioId::sphere_so2_stereo:
      g.a[0] = rng.angle();
      break;
    case ScenarioId::sphere_so3: {
      std::array<double, 3> axis;
      double n = 0.0;
      do {
        for (double& v : axis) v = rng.normal();
        n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
      } while (n < 1e-6);
      for (double& v : axis) v /= n;
      Mat3 r = rodrigues(axis, rng.angle());
      for (int i = 0; i < 9; ++i) g.a[i] = r[i];
      break;
    }
    case ScenarioId::sl2_plane: {
      Mat2 m = mul2(Mat2{1.0, rng.uniform(-0.8, 0.8), 0.0, 1.0},
                    Mat2{1.0, 0.0, rng.uniform(-0.8, 0.8), 1.0});
      double h = rng.uniform(-0.5, 0.5);
      m = mul2(m, Mat2{std::exp(h), 0.0, 0.0, std::exp(-h)});
      for (int i = 0; i < 4; ++i) g.a[i] = m[i];
      break;
    }
    case ScenarioId::rel_unicycle:
      g.a[0] = rng.uniform(-0.2, 0.2);
      g.a[1] = rng.angle();
      break;
    case ScenarioId::su2_quantum: {
      std::array<double, 4> q;
      double n = 0.0;
      do {
        for (double& v : q) v = rng.normal();
        n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
      } while (n < 1e-6);
      for (double& v : q) v /= n;
      C22 m = C22{cplx(q[0], q[3]), cplx(q[1], q[2]), cplx(-q[1], q[2]), cplx(q[0], -q[3])};
      c22_to_span(m, std::span<double>(g.a.data(), 8));
      break;
    }
  }
  return g;
}

GroupElement compose(const GroupElement& g2, const GroupElement& g1) {
  if (g2.scenario != g1.scenario) throw ConfigError("composing elements of different groups");
  GroupElement r = identity_element(g2.scenario, g2.c);
  switch (g2.scenario) {
    case ScenarioId::se2_plane:
    case ScenarioId::unicycle: {
      r.a[0] = wrap_2pi(g2.a[0] + g1.a[0]);
      double bx = g1.a[1], by = g1.a[2];
      rotate2(g2.a[0], bx, by);
      r.a[1] = bx + g2.a[1];
      r.a[2] = by + g2.a[2];
      break;
    }
    case ScenarioId::rel_line: {
      r.a[0] = g2.a[0] + g1.a[0];
      Mat2 b = boost2(g2.a[0], g2.c);
      r.a[1] = b[0] * g1.a[1] + b[1] * g1.a[2] + g2.a[1];
      r.a[2] = b[2] * g1.a[1] + b[3] * g1.a[2] + g2.a[2];
      break;
    }
    case ScenarioId::rel_plane: {
      Mat3 m = mul3(mat3_of(g2), mat3_of(g1));
      for (int i = 0; i < 9; ++i) r.a[i] = m[i];
      std::array<double, 3> v{g1.a[9], g1.a[10], g1.a[11]};
      std::array<double, 3> mv;
      apply3(mat3_of(g2), v, mv);
      for (int i = 0; i < 3; ++i) r.a[9 + i] = mv[i] + g2.a[9 + i];
      break;
    }
    case ScenarioId::circle:
    case ScenarioId::sphere_so2_stereo:
      r.a[0] = wrap_2pi(g2.a[0] + g1.a[0]);
      break;
    case ScenarioId::sphere_so3: {
      Mat3 m = mul3(mat3_of(g2), mat3_of(g1));
      for (int i = 0; i < 9; ++i) r.a[i] = m[i];
      break;
    }
    case ScenarioId::sl2_plane: {
      Mat2 m = mul2(Mat2{g2.a[0], g2.a[1], g2.a[2], g2.a[3]},
                    Mat2{g1.a[0], g1.a[1], g1.a[2], g1.a[3]});
      for (int i = 0; i < 4; ++i) r.a[i] = m[i];
      break;
    }
    case ScenarioId::rel_unicycle:
      r.a[0] = g2.a[0] + g1.a[0];
      r.a[1] = wrap_2pi(g2.a[1] + g1.a[1]);
      break;
    case ScenarioId::su2_quantum: {
      C22 m = c22_from_span(std::span<const double>(g2.a.data(), 8)) *
              c22_from_span(std::span<const double>(g1.a.data(), 8));
      c22_to_span(m, std::span<double>(r.a.data(), 8));
      break;
    }
  }
  return r;
}

double element_defect(const GroupElement& g) {
  switch (g.scenario) {
    case ScenarioId::sphere_so3: {
      Mat3 m = mat3_of(g);
      double worst = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double dot = 0.0;
          for (int k = 0; k < 3; ++k) dot += m[3 * k + i] * m[3 * k + j];
          worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
        }
      double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                   m[2] * (m[3] * m[7] - m[4] * m[6]);
      return worst + std::fabs(det - 1.0);
    }
    case ScenarioId::sl2_plane:
      return std::fabs(g.a[0] * g.a[3] - g.a[1] * g.a[2] - 1.0);
    case ScenarioId::rel_plane: {
      Mat3 m = mat3_of(g);
      double c2 = g.c * g.c;
      double eta[3] = {c2, -1.0, -1.0};
      double worst = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double q = 0.0;
          for (int k = 0; k < 3; ++k) q += m[3 * k + i] * eta[k] * m[3 * k + j];
          worst = std::max(worst, std::fabs(q - (i == j ? eta[i] : 0.0)));
        }
      return worst;
    }
    case ScenarioId::su2_quantum: {
      C22 m = c22_from_span(std::span<const double>(g.a.data(), 8));
      C22 r = m * m.adjoint() - C22::identity();
      return r.max_abs() + std::abs(m.det() - 1.0);
    }
    default:
      return 0.0;
  }
}

Configuration act(const GroupElement& g, const Configuration& cfg) {
  if (g.scenario != cfg.scenario) throw ConfigError("group element / configuration mismatch");
  Configuration out = cfg;
  for (int i = 0; i < cfg.n_agents; ++i) {
    auto in = cfg.agent(i);
    auto o = out.agent(i);
    switch (cfg.scenario) {
      case ScenarioId::se2_plane: {
        double x = in[0], y = in[1];
        rotate2(g.a[0], x, y);
        o[0] = x + g.a[1];
        o[1] = y + g.a[2];
        break;
      }
      case ScenarioId::unicycle: {
        double x = in[0], y = in[1];
        rotate2(g.a[0], x, y);
        o[0] = x + g.a[1];
        o[1] = y + g.a[2];
        o[2] = in[2] + g.a[0];
        break;
      }
      case ScenarioId::rel_line: {
        Mat2 b = boost2(g.a[0], cfg.c);
        o[0] = b[0] * in[0] + b[1] * in[1] + g.a[1];
        o[1] = b[2] * in[0] + b[3] * in[1] + g.a[2];
        break;
      }
      case ScenarioId::rel_plane: {
        apply3(mat3_of(g), in, o);
        for (int k = 0; k < 3; ++k) o[k] += g.a[9 + k];
        break;
      }
      case ScenarioId::circle:
        o[0] = in[0] + g.a[0];
        break;
      case ScenarioId::sphere_so3:
        apply3(mat3_of(g), in, o);
        break;
      case ScenarioId::sphere_so2_stereo: {
        double x = in[0], y = in[1];
        rotate2(g.a[0], x, y);
        o[0] = x;
        o[1] = y;
        break;
      }
      case ScenarioId::sl2_plane:
        o[0] = g.a[0] * in[0] + g.a[1] * in[1];
        o[1] = g.a[2] * in[0] + g.a[3] * in[1];
        break;
      case ScenarioId::rel_unicycle: {
        Mat2 b = boost2(g.a[0], cfg.c);
        o[0] = b[0] * in[0] + b[1] * in[1];
        o[1] = b[2] * in[0] + b[3] * in[1];
        o[2] = in[2] + g.a[1];
        o[3] = in[3] + g.a[1];
        break;
      }
      case ScenarioId::su2_quantum: {
        C22 gm = c22_from_span(std::span<const double>(g.a.data(), 8));
        C22 x = c22_from_span(in);
        c22_to_span(gm * x * gm.transpose(), o);
        break;
      }
    }
  }
  canonicalize(out);
  std::string why;
  if (!in_chart_domain(out, &why)) throw DomainError("action left the chart: " + why);
  return out;
}

std::vector<double> generator_field(ScenarioId id, int k, const Configuration& cfg) {
  std::vector<double> f(cfg.x.size(), 0.0);
  int d = dim_per_agent(id);
  for (int i = 0; i < cfg.n_agents; ++i) {
    auto a = cfg.agent(i);
    double* o = f.data() + std::size_t(i) * d;
    switch (id) {
      case ScenarioId::se2_plane:
      case ScenarioId::unicycle:
        if (k == 0) o[0] = 1.0;
        else if (k == 1) o[1] = 1.0;
        else {
          o[0] = -a[1];
          o[1] = a[0];
          if (id == ScenarioId::unicycle) o[2] = 1.0;
        }
        break;
      case ScenarioId::rel_line:
        if (k == 0) o[0] = 1.0;
        else if (k == 1) o[1] = 1.0;
        else {
          o[0] = a[1] / cfg.c;
          o[1] = cfg.c * a[0];
        }
        break;
      case ScenarioId::rel_plane:
        if (k < 3) o[k] = 1.0;
        else if (k == 3) {
          o[0] = a[1] / cfg.c;
          o[1] = cfg.c * a[0];
        } else if (k == 4) {
          o[0] = a[2] / cfg.c;
          o[2] = cfg.c * a[0];
        } else {
          o[1] = -a[2];
          o[2] = a[1];
        }
        break;
      case ScenarioId::circle:
        o[0] = 1.0;
        break;
      case ScenarioId::sphere_so3:
        // e_k x X
        if (k == 0) { o[1] = -a[2]; o[2] = a[1]; }
        else if (k == 1) { o[0] = a[2]; o[2] = -a[0]; }
        else { o[0] = -a[1]; o[1] = a[0]; }
        break;
      case ScenarioId::sphere_so2_stereo:
        o[0] = -a[1];
        o[1] = a[0];
        break;
      case ScenarioId::sl2_plane:
        if (k == 0) o[0] = a[1];
        else if (k == 1) o[1] = a[0];
        else { o[0] = a[0]; o[1] = -a[1]; }
        break;
      case ScenarioId::rel_unicycle:
        if (k == 0) {
          o[0] = a[1] / cfg.c;
          o[1] = cfg.c * a[0];
        } else {
          o[2] = 1.0;
          o[3] = 1.0;
        }
        break;
      case ScenarioId::su2_quantum: {
        C22 u = su2_generator(k);
        C22 x = c22_from_span(a);
        c22_to_span(u * x + x * u.transpose(), std::span<double>(o, 8));
        break;
      }
    }
  }
  return f;
}

GroupElement group_exp(ScenarioId id, int k, double t, double c) {
  GroupElement g = identity_element(id, c);
  switch (id) {
    case ScenarioId::se2_plane:
    case ScenarioId::unicycle:
      if (k == 0) g.a[1] = t;
      else if (k == 1) g.a[2] = t;
      else g.a[0] = t;
      break;
    case ScenarioId::rel_line:
      if (k == 0) g.a[1] = t;
      else if (k == 1) g.a[2] = t;
      else g.a[0] = t;
      break;
    case ScenarioId::rel_plane: {
      if (k < 3) {
        g.a[9 + k] = t;
      } else {
        Mat3 m = (k == 3) ? boost3_x(t, c) : (k == 4) ? boost3_y(t, c) : rot3_xy(t);
        for (int i = 0; i < 9; ++i) g.a[i] = m[i];
      }
      break;
    }
    case ScenarioId::circle:
    case ScenarioId::sphere_so2_stereo:
      g.a[0] = t;
      break;
    case ScenarioId::sphere_so3: {
      std::array<double, 3> axis{0, 0, 0};
      axis[k] = 1.0;
      Mat3 m = rodrigues(axis, t);
      for (int i = 0; i < 9; ++i) g.a[i] = m[i];
      break;
    }
    case ScenarioId::sl2_plane:
      if (k == 0) { g.a[0] = 1.0; g.a[1] = t; g.a[3] = 1.0; }
      else if (k == 1) { g.a[0] = 1.0; g.a[2] = t; g.a[3] = 1.0; }
      else { g.a[0] = std::exp(t); g.a[3] = std::exp(-t); }
      break;
    case ScenarioId::rel_unicycle:
      g.a[k] = t;
      break;
    case ScenarioId::su2_quantum: {
      C22 m = cplx(std::cos(t), 0.0) * C22::identity() + cplx(std::sin(t), 0.0) * su2_generator(k);
      c22_to_span(m, std::span<double>(g.a.data(), 8));
      break;
    }
  }
  return g;
}

Configuration exp_action(ScenarioId id, int k, double t, const Configuration& cfg) {
  double scale = 1.0;
  if (id == ScenarioId::rel_line || id == ScenarioId::rel_plane ||
      id == ScenarioId::rel_unicycle)
    scale = std::max(1.0, cfg.c);
  int steps = std::max(64, int(std::ceil(std::fabs(t) * 1000.0 * scale)));
  double h = t / steps;

  Configuration cur = cfg;
  std::size_t n = cfg.x.size();
  std::vector<double> k1, k2, k3, k4;
  Configuration tmp = cfg;
  for (int s = 0; s < steps; ++s) {
    k1 = generator_field(id, k, cur);
    for (std::size_t j = 0; j < n; ++j) tmp.x[j] = cur.x[j] + 0.5 * h * k1[j];
    k2 = generator_field(id, k, tmp);
    for (std::size_t j = 0; j < n; ++j) tmp.x[j] = cur.x[j] + 0.5 * h * k2[j];
    k3 = generator_field(id, k, tmp);
    for (std::size_t j = 0; j < n; ++j) tmp.x[j] = cur.x[j] + h * k3[j];
    k4 = generator_field(id, k, tmp);
    for (std::size_t j = 0; j < n; ++j)
      cur.x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  canonicalize(cur);
  std::string why;
  if (!in_chart_domain(cur, &why)) throw DomainError("generator flow left the chart: " + why);
  return cur;
}

std::array<std::array<double, 16>, 3> quaternion_matrices() {
  std::array<double, 16> ih = {0, -1, 0, 0,
                               1, 0, 0, 0,
                               0, 0, 0, 1,
                               0, 0, -1, 0};
  std::array<double, 16> jh = {0, 0, 1, 0,
                               0, 0, 0, 1,
                               -1, 0, 0, 0,
                               0, -1, 0, 0};
  std::array<double, 16> kh = {0, 0, 0, -1,
                               0, 0, 1, 0,
                               0, -1, 0, 0,
                               1, 0, 0, 0};
  return {ih, jh, kh};
}

bool quaternion_rank_check(const std::array<double, 4>& x, double* det_out) {
  auto mats = quaternion_matrices();
  std::array<double, 16> m{};
  for (int r = 0; r < 4; ++r) m[4 * r] = x[r];
  for (int q = 0; q < 3; ++q)
    for (int r = 0; r < 4; ++r) {
      double v = 0.0;
      for (int cidx = 0; cidx < 4; ++cidx) v += mats[q][4 * r + cidx] * x[cidx];
      m[4 * r + q + 1] = v;
    }
  double det = det4(m);
  if (det_out) *det_out = det;
  double n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  return std::fabs(det) > 1e-12 * std::max(n2 * n2, 1e-300);
}

}  // namespace equidyn
