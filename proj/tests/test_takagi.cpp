#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "equidyn/takagi.hpp"
#include "equidyn/util.hpp"

#ifdef EQUIDYN_HAVE_EIGEN
#include <Eigen/Core>
#include <Eigen/SVD>
#endif

using namespace equidyn;

namespace {

C22 reconstruct(const TakagiFactorization& t) {
  C22 d{t.delta1, 0.0, 0.0, t.delta2};
  return std::polar(1.0, t.omega) * (t.h * d * t.h.transpose());
}

C22 random_symmetric(Rng& rng) {
  cplx a{rng.normal(), rng.normal()};
  cplx b{rng.normal(), rng.normal()};
  cplx d{rng.normal(), rng.normal()};
  return {a, b, b, d};
}

double unitary_defect(const C22& h) {
  C22 r = h * h.adjoint() - C22::identity();
  return r.max_abs();
}

}  // namespace

TEST_CASE("symmetric and antisymmetric parts") {
  C22 x{1.0, 2.0, 4.0, 3.0};
  C22 s = symmetric_part(x);
  CHECK(s.a == cplx(1.0));
  CHECK(s.b == cplx(3.0));
  CHECK(s.c == cplx(3.0));
  CHECK(s.d == cplx(3.0));
  CHECK(antisymmetric_coefficient(x) == cplx(1.0));  // (c - b)/2

  C22 j{0.0, -1.0, 1.0, 0.0};
  CHECK(symmetric_part(j).max_abs() == 0.0);
  CHECK(antisymmetric_coefficient(j) == cplx(1.0));
}

TEST_CASE("positive diagonal matrices factor trivially") {
  TakagiFactorization t = takagi_symmetric({2.0, 0.0, 0.0, 1.0});
  CHECK(t.omega == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.delta1 == doctest::Approx(2.0));
  CHECK(t.delta2 == doctest::Approx(1.0));
  CHECK(t.residual < 1e-12);
  CHECK((reconstruct(t) - C22{2.0, 0.0, 0.0, 1.0}).max_abs() < 1e-12);
}

TEST_CASE("negative entries are absorbed into the phase-frame pair") {
  // The gauge (omega, H) is only fixed modulo omega -> omega - pi,
  // H -> H diag(i, -i); any representative must still reconstruct S.
  C22 s{-1.0, 0.0, 0.0, 0.0};
  TakagiFactorization t = takagi_symmetric(s);
  CHECK(t.delta1 == doctest::Approx(1.0));
  CHECK(t.delta2 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(t.omega >= 0.0);
  CHECK(t.omega < kPi);
  CHECK((reconstruct(t) - s).max_abs() < 1e-12);
}

TEST_CASE("factorization properties hold on random symmetric matrices") {
  Rng rng(1234);
  for (int s = 0; s < 200; ++s) {
    C22 m = random_symmetric(rng);
    TakagiFactorization t = takagi_symmetric(m);

    CHECK(t.delta1 >= t.delta2);
    CHECK(t.delta2 >= -1e-15);
    CHECK(t.omega >= 0.0);
    CHECK(t.omega < kPi);
    CHECK(unitary_defect(t.h) < 1e-12);
    CHECK(std::abs(t.h.det() - cplx(1.0)) < 1e-12);  // H lands in SU(2)

    double err = (reconstruct(t) - m).max_abs();
    double scale = std::max(1.0, m.max_abs());
    CHECK(err < 1e-10 * scale);
    // the reported residual is the same quantity
    CHECK(std::fabs(t.residual - err) < 1e-12 * scale);
  }
}

TEST_CASE("factorization of a scaled matrix scales the singular values") {
  Rng rng(77);
  for (int s = 0; s < 50; ++s) {
    C22 m = random_symmetric(rng);
    double k = std::exp(rng.uniform(-2.0, 2.0));
    TakagiFactorization a = takagi_symmetric(m);
    TakagiFactorization b = takagi_symmetric(cplx(k, 0.0) * m);
    CHECK(b.delta1 == doctest::Approx(k * a.delta1).epsilon(1e-10));
    CHECK(b.delta2 == doctest::Approx(k * a.delta2).epsilon(1e-10));
  }
}

#ifdef EQUIDYN_HAVE_EIGEN
TEST_CASE("singular values match an independent SVD") {
  Rng rng(31415);
  for (int s = 0; s < 200; ++s) {
    C22 m = random_symmetric(rng);
    TakagiFactorization t = takagi_symmetric(m);

    Eigen::Matrix2cd em;
    em << m.a, m.b, m.c, m.d;
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(em);
    double s1 = svd.singularValues()(0);
    double s2 = svd.singularValues()(1);

    double scale = std::max(1.0, m.max_abs());
    CHECK(std::fabs(t.delta1 - s1) < 1e-10 * scale);
    CHECK(std::fabs(t.delta2 - s2) < 1e-10 * scale);
  }
}
#endif
