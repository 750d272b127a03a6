#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scsgp/errors.hpp"
#include "scsgp/phase.hpp"

using namespace scsgp;
using namespace scsgp::phase;
using states::Family;
using states::MixedStateSpec;
using states::SCSParams;

namespace {

constexpr double kPi = std::numbers::pi;

evolution::EvolutionContext make(double theta, double r_ref, int n_max) {
  evolution::EvolutionSpec s;
  s.theta = theta;
  s.r_ref = r_ref;
  s.trunc.n_max = n_max;
  return evolution::EvolutionContext(s);
}

evolution::EvolutionSpec evo(double theta, double r_ref) {
  evolution::EvolutionSpec s;
  s.theta = theta;
  s.r_ref = r_ref;
  return s;
}

}  // namespace

TEST_CASE("wrapping convention") {
  CHECK(wrap(0.3) == doctest::Approx(0.3));
  CHECK(wrap(-kPi) == doctest::Approx(kPi));
  CHECK(wrap(kPi) == doctest::Approx(kPi));
  CHECK(wrap(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap(-2 * kPi) == doctest::Approx(0.0));
  CHECK(wrap(7.0) == doctest::Approx(7.0 - 2 * kPi));
  CHECK(arg(cplx(-1.0, 0.0)) == kPi);
  CHECK(arg(cplx(-1.0, -0.0)) == kPi);
  CHECK(arg(cplx(0.0, -1.0)) == doctest::Approx(-kPi / 2));
  CHECK(parse_norm("paper-literal") == NormMode::paper_literal);
  CHECK_THROWS_AS(parse_norm("other"), std::invalid_argument);
}

TEST_CASE("total phase") {
  {
    const auto ctx = make(0.0, 0.0, 4);
    const auto pair = states::build_pair({Family::sep_balanced, 1.0, {0.0, 0.0}, {0.0, 0.0}}, [] {
      fock::Truncation s;
      s.n_max = 4;
      return s;
    }());
    const auto tp = total_phase(pair, ctx);
    CHECK(std::abs(tp.trace - 1.0) < 1e-14);
    CHECK(tp.phase == 0.0);
    CHECK_FALSE(tp.undefined);
  }
  {
    const MixedStateSpec spec{Family::sep_balanced, 1.0, {1.0, 0.0}, {0.0, 0.0}};
    const auto res = geometric_phase_numeric(spec, evo(kPi / 4, 0.0));
    CHECK(std::abs(res.total) <= 1e-8);
    CHECK(res.trace_final.real() > 0.0);
  }
  for (auto f : {Family::entangled, Family::sep_unbalanced}) {
    const auto res = geometric_phase_numeric({f, 0.3, {0.8, 0.2}, {-0.4, 0.2}}, evo(kPi / 3, 0.2));
    CHECK(std::abs(res.trace_final) <= 1 + 1e-10);
  }
}

TEST_CASE("dynamical phase") {
  const auto ctx = make(kPi / 4, 0.2, 24);
  const auto vac = states::build_pair({Family::entangled, 0.4, {0.0, 0.2}, {0.0, 0.2}}, fock::Truncation{});
  CHECK(std::abs(dynamical_phase_closed(vac, ctx)) < 1e-12);

  // entangled family against the closed expression with N = 2 + 2 p^2
  for (double lam : {0.0, 0.3, 1.0}) {
    const SCSParams p0{0.9, 0.2}, p1{-0.6, 0.2};
    const auto pair = states::build_pair({Family::entangled, lam, p0, p1}, fock::Truncation{});
    const auto ctx2 = make(kPi / 4, 0.2, pair.n_max);
    const double p = states::overlap_closed(p0, p1).p01, e0 = states::eta(p0), e1 = states::eta(p1);
    const double n = 2 + 2 * p * p;
    const double expected = 2 * kPi * std::sin(kPi / 4) / n *
                            (lam * (e0 * e0 + e1 * e1 + 2 * e0 * e1 * p * p) +
                             (1 - lam) * ((e0 * e0 + e1 * e1) * p * p + 2 * e0 * e1));
    double imag = 1.0;
    CHECK(std::abs(dynamical_phase_closed(pair, ctx2, &imag) - expected) < 1e-6);
    CHECK(imag <= kImagResidualTol);
  }
}

TEST_CASE("dynamical phase quadrature cross-check") {
  for (double r : {0.0, 0.2}) {
    CAPTURE(r);
    const MixedStateSpec spec{Family::entangled, 0.3, {1.0, r}, {-0.5, r}};
    const auto ctx = make(kPi / 4, r, 48);
    const auto pair = states::build_pair(spec, [] {
      fock::Truncation s;
      s.n_max = 48;
      return s;
    }());
    CHECK(std::abs(dynamical_phase_quadrature(pair, ctx) - dynamical_phase_closed(pair, ctx)) <= 1e-8);
  }
}

TEST_CASE("numeric geometric phase") {
  SUBCASE("vacuum") {
    const auto res = geometric_phase_numeric({Family::entangled, 0.6, {0.0, 0.2}, {0.0, 0.2}}, evo(kPi / 3, 0.2));
    CHECK(std::abs(res.geometric) <= 1e-8);
  }
  SUBCASE("single coherent product at theta = pi/2") {
    const auto res =
        geometric_phase_numeric({Family::sep_balanced, 1.0, {1.0, 0.0}, {0.0, 0.0}}, evo(kPi / 2, 0.0));
    CHECK(res.geometric == doctest::Approx(-2 * kPi).epsilon(1e-8));
    CHECK(std::abs(wrap(res.geometric_wrapped)) <= 1e-8);
  }
  SUBCASE("entangled coherent pair") {
    const MixedStateSpec spec{Family::entangled, 0.5, {1.0, 0.0}, {1.0, 0.0}};
    const auto res = geometric_phase_numeric(spec, evo(kPi / 4, 0.0));
    CHECK(std::abs(wrap(res.geometric + kPi * std::sqrt(2.0))) <= 1e-8);
  }
  SUBCASE("context too small") {
    const auto ctx = make(kPi / 4, 0.2, 8);
    CHECK_THROWS_AS(evaluate({Family::sep_balanced, 0.5, {1.5, 0.5}, {1.5, 0.5}}, ctx), TruncationError);
  }
  SUBCASE("all families against the closed forms") {
    const double theta = 0.9, r = 0.2;
    for (auto f : {Family::entangled, Family::sep_unbalanced, Family::sep_balanced}) {
      const MixedStateSpec spec{f, 0.35, {1.2, r}, {-0.7, r}};
      const auto res = geometric_phase_numeric(spec, evo(theta, r));
      CHECK(std::abs(wrap(gp_analytic(spec, theta) - res.geometric)) <= 1e-8);
      CHECK(std::abs(std::sin(res.total)) <= 1e-6);
    }
  }
}

TEST_CASE("closed forms") {
  const double s4 = std::sin(kPi / 4);
  CHECK(gp_entangled({0.0, 0.3}, {0.0, 0.1}, 0.3, 1.0) == 0.0);
  CHECK(gp_entangled({1.0, 0.0}, {1.0, 0.0}, 0.5, kPi / 4) == doctest::Approx(-4.442882938158366).epsilon(1e-14));
  {
    const SCSParams p0{0.8, 0.2}, p1{-0.3, 0.5};
    const double e = states::eta(p0) + states::eta(p1);
    CHECK(gp_entangled(p0, p1, 0.5, kPi / 4) == doctest::Approx(-kPi / 2 * s4 * e * e).epsilon(1e-13));
    CHECK(gp_sep_unbalanced(p0, p1, 0.5, kPi / 4) ==
          doctest::Approx(-2 * kPi * states::eta(p0) * states::eta(p1) * s4).epsilon(1e-13));
    CHECK(gp_sep_balanced(p0, p1, 0.0, kPi / 4) ==
          doctest::Approx(-2 * kPi * s4 * states::eta(p1) * states::eta(p1)).epsilon(1e-13));
  }
  CHECK(gp_sep_unbalanced({1.0, 0.0}, {0.0, 0.0}, 1.0, 0.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(gp_sep_balanced({1.0, 0.0}, {0.4, 0.0}, 1.0, kPi / 2) == doctest::Approx(-2 * kPi).epsilon(1e-15));
  CHECK(gp_sep_balanced({1.0, 0.3}, {0.4, 0.1}, 0.3, 0.0) == 0.0);
  CHECK(gp_sep_balanced({1.0, 0.3}, {0.4, 0.1}, 0.3, kPi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  // identical overlaps make the two normalizations coincide
  CHECK(gp_entangled({0.6, 0.2}, {0.6, 0.2}, 0.3, 1.0, NormMode::paper_literal) ==
        doctest::Approx(gp_entangled({0.6, 0.2}, {0.6, 0.2}, 0.3, 1.0)).epsilon(1e-14));
  CHECK(std::abs(gp_entangled({0.6, 0.2}, {-0.6, 0.2}, 0.3, 1.0, NormMode::paper_literal) -
                 gp_entangled({0.6, 0.2}, {-0.6, 0.2}, 0.3, 1.0)) > 1e-3);
  CHECK_THROWS_AS(gp_sep_balanced({1.0, 0.3}, {0.4, 0.1}, -0.1, 0.5), std::invalid_argument);
}

TEST_CASE("closed-form symmetries") {
  const double theta = 0.7;
  for (double lam : {0.0, 0.3, 0.5, 1.0}) {
    const SCSParams p0{0.9, 0.2}, p1{-0.4, 0.5};
    const SCSParams m0{-0.9, 0.2}, m1{0.4, 0.5};
    for (auto f : {Family::entangled, Family::sep_unbalanced, Family::sep_balanced}) {
      const double g = gp_analytic({f, lam, p0, p1}, theta);
      CHECK(std::abs(gp_analytic({f, lam, m0, m1}, theta) - g) <= 1e-12);
    }
    // relabeling the two components
    CHECK(std::abs(gp_entangled(p1, p0, lam, theta) - gp_entangled(p0, p1, lam, theta)) <= 1e-12);
    CHECK(std::abs(gp_sep_unbalanced(p1, p0, 1 - lam, theta) - gp_sep_unbalanced(p0, p1, lam, theta)) <= 1e-12);
    CHECK(std::abs(gp_sep_balanced(p1, p0, 1 - lam, theta) - gp_sep_balanced(p0, p1, lam, theta)) <= 1e-12);
  }
}

TEST_CASE("separable forms depend on eta only") {
  const double theta = 0.6, lam = 0.3;
  const double r0 = 0.5, r1 = 0.3, a0 = 0.7, a1 = -1.1;
  for (double d0 : {0.1, 0.5})
    for (double d1 : {0.0, 0.3}) {
      const SCSParams q0{a0 * std::exp(d0), r0 - d0}, q1{a1 * std::exp(d1), r1 - d1};
      CHECK(std::abs(gp_sep_unbalanced(q0, q1, lam, theta) - gp_sep_unbalanced({a0, r0}, {a1, r1}, lam, theta)) <=
            1e-12);
      CHECK(std::abs(gp_sep_balanced(q0, q1, lam, theta) - gp_sep_balanced({a0, r0}, {a1, r1}, lam, theta)) <= 1e-12);
    }
}

TEST_CASE("balanced form is linear in lambda") {
  const SCSParams p0{0.8, 0.2}, p1{0.8, 0.5};
  const double theta = kPi / 4, h = 1e-4;
  const double e0 = states::eta(p0), e1 = states::eta(p1);
  const double slope = (gp_sep_balanced(p0, p1, 0.5 + h, theta) - gp_sep_balanced(p0, p1, 0.5 - h, theta)) / (2 * h);
  const double expected = -2 * kPi * std::sin(theta) * (e0 * e0 - e1 * e1);
  CHECK(slope == doctest::Approx(expected).epsilon(1e-8));
  CHECK(slope > 0.0);  // eta0 < eta1
}

TEST_CASE("operator buffer does not move the phases") {
  const MixedStateSpec spec{Family::entangled, 0.3, {1.0, 0.2}, {-0.5, 0.2}};
  auto with_buffer = [&](int buffer) {
    auto e = evo(kPi / 4, 0.2);
    e.trunc.buffer = buffer;
    return geometric_phase_numeric(spec, e);
  };
  const auto a = with_buffer(10), b = with_buffer(0);
  CHECK(std::abs(a.dynamical - b.dynamical) < 1e-8);
  CHECK(std::abs(a.total - b.total) < 1e-8);
}
