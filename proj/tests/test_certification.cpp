#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "segrega/certification.hpp"
#include "segrega/error.hpp"
#include "segrega/models.hpp"
#include "segrega/nodal_partition.hpp"

using namespace segrega;

namespace {

const QuadratureRule& rule() {
  static const QuadratureRule r(4096);
  return r;
}

BoundaryFunction cos3 = [](double t) { return std::cos(3 * t); };

double value_of(const std::vector<NamedMoment>& v, const std::string& name) {
  for (const auto& m : v) {
    if (m.name == name) return m.value;
  }
  FAIL("missing moment " << name);
  return 0.0;
}

}  // namespace

TEST_CASE("cos(3 theta) at the origin") {
  const DiskPoint o(0.0, 0.0);
  const auto ch = chebyshev_moments(cos3, o, 3, rule(), 1.0);
  CHECK(ch.cheb_T.size() == 3);
  CHECK(ch.cheb_U.size() == 2);
  for (double v : ch.cheb_T) CHECK(std::abs(v) < 1e-10);
  for (double v : ch.cheb_U) CHECK(std::abs(v) < 1e-10);
  CHECK(ch.verdict);
  const auto mo = monomial_moments(cos3, o, 3, rule(), 1.0);
  CHECK(mo.monomial.size() == 6);
  for (const auto& m : mo.monomial) CHECK(std::abs(m.value) < 1e-10);
  CHECK(mo.verdict);
  const auto r = is_2s_point(cos3, o, 3, rule(), 1.0);
  CHECK(r.is_2s_point);
  CHECK(r.leading_nonzero);
  CHECK(r.a_s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.equivalent);
}

TEST_CASE("cos(3 theta) away from the origin") {
  const DiskPoint p(0.3, 0.0);
  const auto ch = chebyshev_moments(cos3, p, 3, rule(), 1.0);
  CHECK(ch.cheb_T[0] == doctest::Approx(kTwoPi * 0.027).epsilon(1e-8));
  CHECK_FALSE(ch.verdict);
  CHECK_FALSE(is_2s_point(cos3, DiskPoint(0.1, 0.1), 3, rule(), 1.0).is_2s_point);
}

TEST_CASE("cos(theta) with s = 1") {
  const auto ch = chebyshev_moments([](double t) { return std::cos(t); }, DiskPoint(0.0, 0.0), 1, rule(), 1.0);
  CHECK(ch.cheb_T.size() == 1);
  CHECK(ch.cheb_U.empty());
  CHECK(std::abs(ch.cheb_T[0]) < 1e-12);
  CHECK(ch.verdict);
}

TEST_CASE("T moments are pi times the recentred coefficients") {
  std::mt19937_64 rng(51);
  const AlternatingDatum a(random_datum(6, rng));
  for (int t = 0; t < 5; ++t) {
    const DiskPoint p(random_point(rng, 0.7));
    const auto ch = chebyshev_moments(a, p, rule());
    const auto g = recenter(a.function(), p, 16, rule());
    for (int j = 0; j < 3; ++j) CHECK(ch.cheb_T[j] == doctest::Approx(kPi * g.A()[j]).epsilon(1e-9));
    for (int j = 1; j < 3; ++j) CHECK(ch.cheb_U[j - 1] == doctest::Approx(kPi * g.B()[j]).epsilon(1e-9));
  }
}

TEST_CASE("four species reduce to mass and first moments") {
  std::mt19937_64 rng(53);
  const AlternatingDatum a(random_datum(4, rng));
  const auto mo = monomial_moments(a, DiskPoint(0.0, 0.0), rule());
  REQUIRE(mo.monomial.size() == 3);
  // the data have kinks where arcs meet, so the default rule is good to O(h^2) there
  const auto z = a.base().zeros();
  auto exact = [&](auto w) { return oracle::piecewise_gauss([&](double t) { return a.eval(t) * w(t); }, z); };
  const double tol = 1e-5;
  CHECK(std::abs(value_of(mo.monomial, "m_0_0") - exact([](double) { return 1.0; })) < tol);
  CHECK(std::abs(value_of(mo.monomial, "m_1_0") - exact([](double t) { return std::cos(t); })) < tol);
  CHECK(std::abs(value_of(mo.monomial, "m_1_1") - exact([](double t) { return std::sin(t); })) < tol);
  const auto fine = monomial_moments(a, DiskPoint(0.0, 0.0), QuadratureRule(1 << 16));
  CHECK(std::abs(value_of(fine.monomial, "m_1_0") - exact([](double t) { return std::cos(t); })) < 1e-7);
}

TEST_CASE("a lower mode spoils the 2s-point") {
  const BoundaryFunction f = [](double t) { return std::cos(t) + 0.5 * std::cos(3 * t); };
  const auto r = is_2s_point(f, DiskPoint(0.0, 0.0), 3, rule(), 1.5);
  CHECK_FALSE(r.is_2s_point);
  CHECK(std::abs(value_of(r.moments.monomial, "m_1_0")) == doctest::Approx(kPi).epsilon(1e-10));
}

TEST_CASE("vanishing moments with a vanishing order-s pair is a degenerate datum") {
  const BoundaryFunction f = [](double t) { return std::cos(4 * t); };
  try {
    is_2s_point(f, DiskPoint(0.0, 0.0), 3, rule(), 1.0);
    FAIL("expected DegenerateDatum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDatum);
  }
}

TEST_CASE("k6 conditions on the symmetric datum") {
  const AlternatingDatum a(AdmissibleDatum::symmetric(6));
  const auto r = k6_conditions(a, DiskPoint(0.0, 0.0), rule());
  CHECK(r.verdict);
  // each condition checked against a 2^15 node integral of the written-out sum
  const int n = 1 << 15;
  const auto& b = a.base();
  auto signed_sum = [&](auto weight) {
    return oracle::trapezoid(
        [&](double t) {
          double s = 0.0;
          for (int j = 0; j < 6; ++j) s += (j % 2 == 0 ? -1.0 : 1.0) * b.species(j, t) * weight(t);
          return s;
        },
        n);
  };
  CHECK(std::abs(value_of(r.conditions, "C1") - signed_sum([](double) { return 1.0; })) < 1e-10);
  CHECK(std::abs(value_of(r.conditions, "C2_1") - signed_sum([](double t) { return std::cos(t); })) < 1e-10);
  CHECK(std::abs(value_of(r.conditions, "C2_2") - signed_sum([](double t) { return std::sin(t); })) < 1e-10);
  CHECK(std::abs(value_of(r.conditions, "C3") - signed_sum([](double t) { return std::cos(t) * std::cos(t); })) <
        1e-10);
  CHECK(std::abs(value_of(r.conditions, "C4") - signed_sum([](double t) { return std::cos(t) * std::sin(t); })) <
        1e-10);
  for (const auto& c : r.conditions) CHECK(std::abs(c.value) < 1e-10);
}

TEST_CASE("k6 conditions on the cosine mode") {
  const auto a = AlternatingDatum::cosine_mode(3);
  CHECK(k6_conditions(a, DiskPoint(0.0, 0.0), rule()).verdict == is_2s_point(a, DiskPoint(0.0, 0.0), rule()).is_2s_point);
  const auto off = k6_conditions(a, DiskPoint(0.2, -0.1), rule());
  CHECK_FALSE(off.verdict);
  const double psi = std::pow(std::hypot(0.2, 0.1), 3) * std::cos(3 * std::atan2(-0.1, 0.2));
  CHECK(value_of(off.conditions, "C1") == doctest::Approx(kTwoPi * psi).epsilon(1e-10));
  CHECK_THROWS_AS(k6_conditions(AlternatingDatum::cosine_mode(2), DiskPoint(0.0, 0.0), rule()), Error);
}

TEST_CASE("derivative characterization examples") {
  const DiskPoint o(0.0, 0.0);
  const auto f3 = solve_dirichlet(cos3, 16, QuadratureRule(256));
  CHECK(derivative_characterization(f3, o, 1.0).verdict);
  const auto f2 = solve_dirichlet([](double t) { return std::cos(2 * t); }, 16, QuadratureRule(256));
  const auto d2 = derivative_characterization(f2, o, 1.0);
  CHECK_FALSE(d2.verdict);
  CHECK(std::abs(d2.value) < 1e-14);
  CHECK(d2.gradient.norm() < 1e-14);
  CHECK(d2.hessian.h11 == doctest::Approx(2.0));
  CHECK(d2.hessian.h22 == doctest::Approx(-2.0));
  const auto d3 = derivative_characterization(f3, DiskPoint(0.5, 0.0), 1.0);
  CHECK_FALSE(d3.verdict);
  CHECK(d3.value == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("pullback derivatives equal series derivatives") {
  std::mt19937_64 rng(57);
  const AlternatingDatum a(random_datum(6, rng));
  const auto f = solve_dirichlet(a);
  for (int t = 0; t < 10; ++t) {
    const DiskPoint p(random_point(rng, 0.7));
    const auto s = derivative_characterization(f, p, 1.0);
    const auto b = pullback_derivatives(a.function(), p, rule(), 1.0);
    CHECK(b.value == doctest::Approx(s.value).epsilon(1e-7));
    CHECK(std::abs(b.gradient.x1 - s.gradient.x1) < 1e-6);
    CHECK(std::abs(b.gradient.x2 - s.gradient.x2) < 1e-6);
    CHECK(std::abs(b.hessian.h11 - s.hessian.h11) < 1e-5);
    CHECK(std::abs(b.hessian.h12 - s.hessian.h12) < 1e-5);
    CHECK(std::abs(b.hessian.h22 - s.hessian.h22) < 1e-5);
  }
}

TEST_CASE("equivalences on random six-species data") {
  std::mt19937_64 rng(59);
  for (int d = 0; d < 5; ++d) {
    const AlternatingDatum a(random_datum(6, rng));
    const auto f = solve_dirichlet(a);
    for (int t = 0; t < 5; ++t) {
      const DiskPoint p(random_point(rng));
      const auto all = all_moments(a.function(), p, 3, rule(), a.base().max_amplitude());
      CHECK(all.cheb_verdict == all.monomial_verdict);
      const auto rebuilt = monomials_from_chebyshev(all);
      REQUIRE(rebuilt.size() == all.monomial.size());
      for (std::size_t i = 0; i < rebuilt.size(); ++i) {
        CHECK(rebuilt[i].name == all.monomial[i].name);
        CHECK(std::abs(rebuilt[i].value - all.monomial[i].value) < 1e-8);
      }
      CHECK(derivative_characterization(f, p, a.base().max_amplitude()).verdict ==
            k6_conditions(a, p, rule()).verdict);
    }
  }
}

TEST_CASE("scaling and index shift leave verdicts unchanged") {
  std::mt19937_64 rng(61);
  const AlternatingDatum a(random_datum(6, rng));
  const DiskPoint p(random_point(rng, 0.5));
  const auto base = all_moments(a.function(), p, 3, rule(), 1.0);
  const double lambda = 3.5;
  const auto scaled = all_moments([&](double t) { return lambda * a.eval(t); }, p, 3, rule(), lambda);
  const auto flipped = all_moments([&](double t) { return -a.eval(t); }, p, 3, rule(), 1.0);
  for (std::size_t i = 0; i < base.monomial.size(); ++i) {
    CHECK(scaled.monomial[i].value == doctest::Approx(lambda * base.monomial[i].value).epsilon(1e-12));
    CHECK(flipped.monomial[i].value == doctest::Approx(-base.monomial[i].value).epsilon(1e-12));
  }
  CHECK(scaled.verdict == base.verdict);
  CHECK(flipped.verdict == base.verdict);
  const auto c3 = AlternatingDatum::cosine_mode(3);
  const auto pos = is_2s_point([&](double t) { return 2.0 * c3.eval(t); }, DiskPoint(0.0, 0.0), 3, rule(), 2.0);
  const auto neg = is_2s_point([&](double t) { return -c3.eval(t); }, DiskPoint(0.0, 0.0), 3, rule(), 1.0);
  CHECK(pos.is_2s_point);
  CHECK(neg.is_2s_point);
}

TEST_CASE("odd species count and boundary points") {
  CHECK_THROWS_AS(chebyshev_moments(cos3, DiskPoint(0.0, 0.0), 0, rule(), 1.0), Error);
  try {
    AlternatingDatum a(AdmissibleDatum::symmetric(5));
    FAIL("expected OddSpeciesCount");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OddSpeciesCount);
  }
}

TEST_CASE("reconstruction of r^3 cos 3theta sectors") {
  const PolarGrid grid(48, 96);
  const auto datum = AlternatingDatum::cosine_mode(3).base();
  const auto psi = [](Complex z) { return std::pow(std::abs(z), 3) * std::cos(3 * std::arg(z)); };
  const auto state = densities_from_signed(grid, psi, datum);
  const auto part = extract_partition(state, datum);
  const auto rep = reconstruct_alternating(state, part);
  const double sgn = rep.psi[grid.index(10, 0)] * psi(std::polar(grid.r(10), 0.0)) > 0 ? 1.0 : -1.0;
  for (int m = 0; m < grid.n_r(); ++m) {
    for (int l = 0; l < grid.n_theta(); ++l) {
      CHECK(sgn * rep.psi[grid.index(m, l)] ==
            doctest::Approx(psi(std::polar(grid.r(m), grid.theta(l)))).epsilon(1e-12));
    }
  }
  CHECK(rep.harmonic);
  CHECK(rep.residual <= rep.tolerance);
}

TEST_CASE("reconstruction refuses odd multiplicities") {
  const PolarGrid grid(64, 128);
  const auto tree = k6_tree_three_five();
  const auto state = tree_densities(grid, tree);
  const auto part = extract_partition(state, tree.zeros);
  try {
    reconstruct_alternating(state, part);
    FAIL("expected OddMultiplicityPresent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OddMultiplicityPresent);
  }
}
