#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "equidyn/family.hpp"
#include "equidyn/util.hpp"

using namespace equidyn;

namespace {

FamilySpec spec(ScenarioId id, int n, std::vector<std::vector<std::string>> coeffs,
                FamilyKind kind = FamilyKind::standard, double c = 1.0) {
  FamilySpec s;
  s.scenario = id;
  s.kind = kind;
  s.n_agents = n;
  s.c = c;
  s.coefficients = std::move(coeffs);
  return s;
}

std::vector<double> eval_or_die(const DynamicsFamily& fam, const Configuration& cfg) {
  std::vector<double> out(std::size_t(fam.dim()));
  std::string why;
  REQUIRE_MESSAGE(fam.eval(cfg, out, &why), why);
  return out;
}

}  // namespace

TEST_CASE("slot names follow the scenario and kind") {
  CHECK(family_slot_names(ScenarioId::se2_plane, FamilyKind::standard, 2) ==
        std::vector<std::string>{"lambda", "mu"});
  CHECK(family_slot_names(ScenarioId::rel_line, FamilyKind::standard, 2) ==
        std::vector<std::string>{"phi", "psi"});
  CHECK(family_slot_names(ScenarioId::rel_plane, FamilyKind::standard, 2) ==
        std::vector<std::string>{"psi"});
  CHECK(family_slot_names(ScenarioId::rel_plane, FamilyKind::standard, 3) ==
        std::vector<std::string>{"phi", "psi"});
  CHECK(family_slot_names(ScenarioId::sl2_plane, FamilyKind::standard, 1) ==
        std::vector<std::string>{"alpha"});
  CHECK(family_slot_names(ScenarioId::sl2_plane, FamilyKind::standard, 2) ==
        std::vector<std::string>{"c1", "c2"});
  CHECK(family_slot_names(ScenarioId::se2_plane, FamilyKind::gradient, 2) ==
        std::vector<std::string>{"lambda"});
  CHECK(family_slot_names(ScenarioId::circle, FamilyKind::raw_angle, 2) ==
        std::vector<std::string>{"phi"});
  CHECK(family_shares_coefficients(FamilyKind::exchangeable));
  CHECK(family_shares_coefficients(FamilyKind::gradient));
  CHECK_FALSE(family_shares_coefficients(FamilyKind::standard));
  CHECK_FALSE(family_shares_coefficients(FamilyKind::broken_translation));
}

TEST_CASE("family kinds round-trip and reject unknown names") {
  for (FamilyKind k : {FamilyKind::standard, FamilyKind::exchangeable, FamilyKind::gradient,
                       FamilyKind::broken_translation, FamilyKind::raw_angle,
                       FamilyKind::lateral_slip})
    CHECK(family_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(family_kind_from_string("smooth"), ConfigError);
}

TEST_CASE("malformed family specs are rejected with a reason") {
  // missing slot
  CHECK_THROWS_AS(build_family(spec(ScenarioId::se2_plane, 2, {{"1", "0"}})), ConfigError);
  // wrong per-agent arity
  CHECK_THROWS_AS(build_family(spec(ScenarioId::se2_plane, 2, {{"1"}, {"0", "0"}})),
                  ConfigError);
  // structured kinds are tied to their geometry
  CHECK_THROWS_AS(
      build_family(spec(ScenarioId::circle, 2, {{"1"}, {"0"}}, FamilyKind::exchangeable)),
      ConfigError);
  CHECK_THROWS_AS(
      build_family(spec(ScenarioId::se2_plane, 2, {{"1", "1"}}, FamilyKind::raw_angle)),
      ConfigError);
  CHECK_THROWS_AS(
      build_family(spec(ScenarioId::circle, 2, {{"1", "1"}, {"0", "0"}},
                        FamilyKind::lateral_slip)),
      ConfigError);
  CHECK_THROWS_AS(
      build_family(spec(ScenarioId::se2_plane, 3, {{"1"}}, FamilyKind::gradient)),
      ConfigError);
  // the quantum chart stores the joint state in one block
  CHECK_THROWS_AS(build_family(spec(ScenarioId::su2_quantum, 2,
                                    {{"1", "1"}, {"0", "0"}})),
                  ConfigError);
  // nonpositive metric constant
  CHECK_THROWS_AS(
      build_family(spec(ScenarioId::rel_line, 2, {{"1", "1"}, {"0", "0"}},
                        FamilyKind::standard, -1.0)),
      ConfigError);
  // coefficients may only read the joint invariants
  CHECK_THROWS_AS(build_family(spec(ScenarioId::se2_plane, 2, {{"x1", "0"}, {"0", "0"}})),
                  ConfigError);
  // a single linear agent has no invariants at all, so only constants work
  CHECK_THROWS_AS(build_family(spec(ScenarioId::sl2_plane, 1, {{"0.4*w12"}})), ConfigError);
  CHECK_NOTHROW(build_family(spec(ScenarioId::sl2_plane, 1, {{"0.4"}})));
}

TEST_CASE("planar field is coefficient times relative displacement plus its rotation") {
  auto fam = build_family(spec(ScenarioId::se2_plane, 2, {{"1", "0"}, {"0", "1"}}));
  auto cfg = make_configuration(ScenarioId::se2_plane, 2, {0, 0, 1, 2});
  auto f = eval_or_die(fam, cfg);
  // agent 1: lambda = 1, mu = 0 -> z; agent 2: lambda = 0, mu = 1 -> J z
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(2.0));
  CHECK(f[2] == doctest::Approx(-2.0));
  CHECK(f[3] == doctest::Approx(1.0));

  auto scaled = build_family(spec(ScenarioId::se2_plane, 2, {{"0", "rho2"}, {"0", "0"}}));
  auto far = make_configuration(ScenarioId::se2_plane, 2, {0, 0, 3, 4});
  auto g = eval_or_die(scaled, far);
  CHECK(g[2] == doctest::Approx(15.0));
  CHECK(g[3] == doctest::Approx(20.0));

  std::string why;
  auto coincident = make_configuration(ScenarioId::se2_plane, 2, {1, 1, 1, 1});
  CHECK_FALSE(fam.in_domain(coincident, &why));
  CHECK(why.find("coincides") != std::string::npos);
}

TEST_CASE("opposed-pair family moves the agents along the connecting line") {
  auto fam = build_family(spec(ScenarioId::se2_plane, 2, {{"1"}}, FamilyKind::gradient));
  CHECK(fam.slot_names() == std::vector<std::string>{"lambda"});
  auto cfg = make_configuration(ScenarioId::se2_plane, 2, {0, 0, 1, 2});
  auto f = eval_or_die(fam, cfg);
  CHECK(f[0] == doctest::Approx(-1.0));
  CHECK(f[1] == doctest::Approx(-2.0));
  CHECK(f[2] == doctest::Approx(1.0));
  CHECK(f[3] == doctest::Approx(2.0));
}

TEST_CASE("interchangeable family pushes each agent toward the crowd") {
  auto fam = build_family(
      spec(ScenarioId::se2_plane, 2, {{"0"}, {"1"}}, FamilyKind::exchangeable));
  auto cfg = make_configuration(ScenarioId::se2_plane, 2, {0, 0, 2, 0});
  auto f = eval_or_die(fam, cfg);
  // w_i points from agent i to the others; mu = 1 rotates it a quarter turn
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(2.0));
  CHECK(f[2] == doctest::Approx(0.0));
  CHECK(f[3] == doctest::Approx(-2.0));
}

TEST_CASE("relabeling two interchangeable agents relabels the field bitwise") {
  auto fam = build_family(spec(ScenarioId::se2_plane, 2,
                               {{"rho1 - 1"}, {"0.5*rho1"}}, FamilyKind::exchangeable));
  Rng rng(8);
  for (int s = 0; s < 100; ++s) {
    double coords[4];
    for (double& v : coords) v = rng.uniform(-3.0, 3.0);
    auto cfg = make_configuration(ScenarioId::se2_plane, 2,
                                  {coords[0], coords[1], coords[2], coords[3]});
    auto swapped = make_configuration(ScenarioId::se2_plane, 2,
                                      {coords[2], coords[3], coords[0], coords[1]});
    std::vector<double> f(4), g(4);
    std::string why;
    if (!fam.eval(cfg, f, &why)) continue;  // coincident draw
    REQUIRE(fam.eval(swapped, g, &why));
    CHECK(g[0] == f[2]);
    CHECK(g[1] == f[3]);
    CHECK(g[2] == f[0]);
    CHECK(g[3] == f[1]);
  }
}

TEST_CASE("translation-broken control differs from the clean family by a raw term") {
  auto clean = build_family(spec(ScenarioId::se2_plane, 2, {{"1", "0"}, {"0.5", "-0.5"}}));
  auto broken = build_family(spec(ScenarioId::se2_plane, 2, {{"1", "0"}, {"0.5", "-0.5"}},
                                  FamilyKind::broken_translation));
  auto cfg = make_configuration(ScenarioId::se2_plane, 2, {0.7, -0.2, 1.5, 2.5});
  auto f = eval_or_die(clean, cfg);
  auto g = eval_or_die(broken, cfg);
  CHECK(g[0] == doctest::Approx(f[0] + 0.7));
  CHECK(g[1] == f[1]);
  CHECK(g[2] == f[2]);
  CHECK(g[3] == f[3]);
}

TEST_CASE("angle-reading control evaluates coefficients on raw coordinates") {
  auto fam = build_family(
      spec(ScenarioId::circle, 2, {{"th1", "th2"}}, FamilyKind::raw_angle));
  CHECK(fam.variables() == std::vector<std::string>{"th1", "th2"});
  auto cfg = make_configuration(ScenarioId::circle, 2, {0.5, 1.0});
  auto f = eval_or_die(fam, cfg);
  CHECK(f[0] == doctest::Approx(0.5));
  CHECK(f[1] == doctest::Approx(1.0));
}

TEST_CASE("circle family turns each agent at an invariant rate") {
  auto fam = build_family(spec(ScenarioId::circle, 2, {{"0", "sin(d21)"}}));
  auto cfg = make_configuration(ScenarioId::circle, 2, {0.0, kPi / 2});
  auto f = eval_or_die(fam, cfg);
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(1.0));
}

TEST_CASE("unicycle family respects the rolling direction; the slip control does not") {
  auto fam = build_family(spec(ScenarioId::unicycle, 1, {{"2"}, {"0.5"}}));
  auto cfg = make_configuration(ScenarioId::unicycle, 1, {0, 0, kPi / 2});
  auto f = eval_or_die(fam, cfg);
  CHECK(f[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(2.0));
  CHECK(f[2] == doctest::Approx(0.5));

  auto slip = build_family(
      spec(ScenarioId::unicycle, 1, {{"0"}, {"0"}}, FamilyKind::lateral_slip));
  auto at_zero = make_configuration(ScenarioId::unicycle, 1, {0, 0, 0});
  auto g = eval_or_die(slip, at_zero);
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(0.3));  // pure sideways push
  CHECK(g[2] == doctest::Approx(0.0));
}

TEST_CASE("spacetime families act through the relative displacement and its dual") {
  auto fam = build_family(spec(ScenarioId::rel_line, 2, {{"0", "0"}, {"1", "1"}},
                               FamilyKind::standard, 2.0));
  auto cfg = make_configuration(ScenarioId::rel_line, 2, {0, 0, 1, 0}, 2.0);
  auto f = eval_or_die(fam, cfg);
  // psi couples through (zx/c, c*zT)
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(2.0));
  CHECK(f[2] == doctest::Approx(0.0));
  CHECK(f[3] == doctest::Approx(2.0));

  auto plane = build_family(spec(ScenarioId::rel_plane, 2, {{"1", "-1"}}));
  auto pcfg = make_configuration(ScenarioId::rel_plane, 2, {0, 0, 0, 2, 1, 0.5});
  auto g = eval_or_die(plane, pcfg);
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(g[2] == doctest::Approx(0.5));
  CHECK(g[3] == doctest::Approx(-2.0));
}

TEST_CASE("hyperbolic unicycle velocities stay on the steering cone") {
  auto fam = build_family(spec(ScenarioId::rel_unicycle, 1, {{"1"}, {"0"}}));
  auto cfg = make_configuration(ScenarioId::rel_unicycle, 1, {2.0, 1.0, 0.25, 0.65});
  auto f = eval_or_die(fam, cfg);
  double a = 0.4;
  CHECK(f[0] == doctest::Approx(2.0 * std::cos(a)));
  CHECK(f[1] == doctest::Approx(1.0 * std::cos(a)));
  CHECK(f[2] == doctest::Approx(std::sin(a)));
  CHECK(f[3] == doctest::Approx(0.0));
}

TEST_CASE("linear-pair family combines the two base positions") {
  auto fam = build_family(spec(ScenarioId::sl2_plane, 2, {{"1", "0"}, {"0", "w12"}}));
  auto cfg = make_configuration(ScenarioId::sl2_plane, 2, {1, 0, 1, 2});
  auto f = eval_or_die(fam, cfg);
  // w12 = 2; agent 1 moves along p1, agent 2 along w12 * p2
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(0.0));
  CHECK(f[2] == doctest::Approx(2.0));
  CHECK(f[3] == doctest::Approx(4.0));
}

TEST_CASE("quantum field multiplies the matrix parts by i") {
  auto fam = build_family(spec(ScenarioId::su2_quantum, 1, {{"1"}, {"0"}}));
  auto cfg = make_configuration(ScenarioId::su2_quantum, 1, {2, 0, 0, 0, 0, 0, 1, 0});
  auto f = eval_or_die(fam, cfg);
  // X = diag(2, 1): F = i * diag(2, 1)
  CHECK(f == std::vector<double>{0, 2, 0, 0, 0, 0, 0, 1});
}

TEST_CASE("eval rejects a configuration from another scenario") {
  auto fam = build_family(spec(ScenarioId::se2_plane, 2, {{"1", "0"}, {"0", "0"}}));
  auto wrong = make_configuration(ScenarioId::circle, 2, {0.0, 1.0});
  std::vector<double> out(4);
  CHECK_THROWS_AS(fam.eval(wrong, out), ConfigError);
}

TEST_CASE("coefficient accessor keeps the source text") {
  auto fam = build_family(spec(ScenarioId::se2_plane, 2, {{"1 - rho2", "0"}, {"0", "0.5"}}));
  CHECK(fam.coefficient(0, 0).source() == "1 - rho2");
  CHECK(fam.coefficient(1, 1).source() == "0.5");
  CHECK(fam.permutation_equivariant() == false);
  CHECK(fam.has_rolling_constraint() == false);

  auto uni = build_family(spec(ScenarioId::unicycle, 1, {{"1"}, {"0"}}));
  CHECK(uni.has_rolling_constraint());
}
