#pragma once

#include <complex>
#include <span>

namespace equidyn {

using cplx = std::complex<double>;

/// Row-major complex 2x2 matrix [[a, b], [c, d]].
struct C22 {
  cplx a{}, b{}, c{}, d{};

  static C22 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  friend C22 operator*(const C22& p, const C22& q) {
    return {p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d,
            p.c * q.a + p.d * q.c, p.c * q.b + p.d * q.d};
  }
  friend C22 operator+(const C22& p, const C22& q) {
    return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
  }
  friend C22 operator-(const C22& p, const C22& q) {
    return {p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d};
  }
  friend C22 operator*(cplx s, const C22& p) { return {s * p.a, s * p.b, s * p.c, s * p.d}; }

  C22 transpose() const { return {a, c, b, d}; }
  C22 conj() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }
  C22 adjoint() const { return conj().transpose(); }
  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }
  double frob() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }
  double max_abs() const {
    double m = std::abs(a);
    m = std::max(m, std::abs(b));
    m = std::max(m, std::abs(c));
    return std::max(m, std::abs(d));
  }
};

/// Interleaved real layout [re a, im a, re b, im b, re c, im c, re d, im d].
inline C22 c22_from_span(std::span<const double> v) {
  return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
}

inline void c22_to_span(const C22& m, std::span<double> v) {
  v[0] = m.a.real(); v[1] = m.a.imag();
  v[2] = m.b.real(); v[3] = m.b.imag();
  v[4] = m.c.real(); v[5] = m.c.imag();
  v[6] = m.d.real(); v[7] = m.d.imag();
}

/// su(2) basis used throughout: u1 = [[0,1],[-1,0]], u2 = [[0,i],[i,0]],
/// u3 = [[i,0],[0,-i]]; each squares to -I.
inline C22 su2_generator(int k) {
  const cplx i{0.0, 1.0};
  switch (k) {
    case 0: return {0.0, 1.0, -1.0, 0.0};
    case 1: return {0.0, i, i, 0.0};
    default: return {i, 0.0, 0.0, -i};
  }
}

}  // namespace equidyn
