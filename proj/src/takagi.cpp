#include "equidyn/takagi.hpp"

#include <cmath>

#include "equidyn/util.hpp"

namespace equidyn {
namespace {

struct Vec2c {
  cplx a, b;
  double norm() const { return std::sqrt(std::norm(a) + std::norm(b)); }
};

Vec2c matvec(const C22& m, const Vec2c& v) {
  return {m.a * v.a + m.b * v.b, m.c * v.a + m.d * v.b};
}

// Unit eigenvector of a Hermitian 2x2 matrix for its largest eigenvalue.
Vec2c top_eigenvector(const C22& m, double lam_max) {
  double off = std::abs(m.b);
  if (off > 1e-14 * (1.0 + std::abs(lam_max))) {
    Vec2c w{m.b, cplx(lam_max - m.a.real(), 0.0)};
    double n = w.norm();
    if (n > 1e-150) return {w.a / n, w.b / n};
  }
  if (m.a.real() >= m.d.real()) return {cplx(1, 0), cplx(0, 0)};
  return {cplx(0, 0), cplx(1, 0)};
}

C22 reconstruct(double omega, const C22& h, double d1, double d2) {
  C22 d{cplx(d1, 0), 0, 0, cplx(d2, 0)};
  return std::exp(cplx(0, omega)) * (h * d * h.transpose());
}

}  // namespace

C22 symmetric_part(const C22& x) {
  return {x.a, 0.5 * (x.b + x.c), 0.5 * (x.b + x.c), x.d};
}

cplx antisymmetric_coefficient(const C22& x) { return 0.5 * (x.c - x.b); }

TakagiFactorization takagi_symmetric(const C22& s) {
  TakagiFactorization out;
  double scale = s.max_abs();
  if (scale < 1e-150) {
    out.residual = (s - reconstruct(0.0, C22::identity(), 0.0, 0.0)).max_abs();
    return out;
  }

  // conj(S)*S is Hermitian PSD with eigenvalues delta_i^2.
  C22 m = s.conj() * s;
  double tr = m.a.real() + m.d.real();
  double gap = std::sqrt(sqr(0.5 * (m.a.real() - m.d.real())) + std::norm(m.b));
  double lam1 = std::max(0.0, 0.5 * tr + gap);
  double lam2 = std::max(0.0, 0.5 * tr - gap);
  out.delta1 = std::sqrt(lam1);
  out.delta2 = std::sqrt(lam2);

  // w solves conj(S)S w = delta1^2 w. For the antilinear map A(u) = S conj(u)
  // the vector z = conj(w) satisfies A(A(z)) = delta1^2 z, so
  // y = A(z) + delta1 z = S w + delta1 conj(w) obeys A(y) = delta1 y unless it
  // cancels; cancellation means A(z) = -delta1 z and then u1 = i z works.
  Vec2c w = top_eigenvector(m, lam1);
  Vec2c sw = matvec(s, w);
  Vec2c y{sw.a + out.delta1 * std::conj(w.a), sw.b + out.delta1 * std::conj(w.b)};
  Vec2c u1;
  if (y.norm() > 1e-9 * out.delta1) {
    double n = y.norm();
    u1 = {y.a / n, y.b / n};
  } else {
    u1 = {cplx(0, 1) * std::conj(w.a), cplx(0, 1) * std::conj(w.b)};
  }

  // The orthogonal complement q of u1 is mapped by v -> S conj(v) into its
  // own span; c below has |c| = delta2, and a half-phase rotation of q makes
  // the con-eigenvalue real nonnegative.
  Vec2c q{-std::conj(u1.b), std::conj(u1.a)};
  Vec2c sq = matvec(s, {std::conj(q.a), std::conj(q.b)});
  cplx cval = std::conj(q.a) * sq.a + std::conj(q.b) * sq.b;
  Vec2c u2 = q;
  if (std::abs(cval) > 1e-14 * scale) {
    cplx ph = std::exp(cplx(0, 0.5 * std::arg(cval)));
    u2 = {ph * q.a, ph * q.b};
  }

  C22 u{u1.a, u2.a, u1.b, u2.b};
  out.omega = std::arg(u.det());
  out.h = std::exp(cplx(0, -0.5 * out.omega)) * u;

  // Canonical gauge: omega in [0, pi), remainder absorbed into H.
  C22 twist{cplx(0, 1), 0, 0, cplx(0, -1)};
  if (out.omega < 0.0) {
    out.omega += kPi;
    out.h = out.h * twist;
  } else if (out.omega >= kPi) {
    out.omega -= kPi;
    out.h = out.h * twist;
  }
  // H and -H are equivalent; pin the sign via the first sizable entry of row 0.
  cplx p = (std::abs(out.h.a) > 1e-12) ? out.h.a : out.h.b;
  if (p.real() < -1e-15 || (std::abs(p.real()) <= 1e-15 && p.imag() < 0.0)) {
    out.h = cplx(-1, 0) * out.h;
  }

  out.residual = (s - reconstruct(out.omega, out.h, out.delta1, out.delta2)).max_abs();
  return out;
}

}  // namespace equidyn
