#pragma once

#include "equidyn/c2.hpp"

namespace equidyn {

// Factorization of a complex symmetric 2x2 matrix S as
//   S = exp(i*omega) * H * diag(delta1, delta2) * H^T
// with H in SU(2) and delta1 >= delta2 >= 0. The pair (omega, H) is fixed
// only up to omega -> omega - pi, H -> H*diag(i,-i), so omega is reported in
// the canonical window [0, pi) and H is sign-normalized. Callers comparing
// phases must do so modulo pi.
struct TakagiFactorization {
  double omega = 0.0;
  C22 h = C22::identity();
  double delta1 = 0.0;
  double delta2 = 0.0;
  double residual = 0.0;  // max-abs error of the reconstruction
};

TakagiFactorization takagi_symmetric(const C22& s);

// Symmetric part (X + X^T)/2 of a 2x2 complex matrix.
C22 symmetric_part(const C22& x);

// The antisymmetric part of a 2x2 matrix is a multiple of [[0,-1],[1,0]];
// this returns that multiple, i.e. entry (1,0) of (X - X^T)/2.
cplx antisymmetric_coefficient(const C22& x);

}  // namespace equidyn
