#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "segrega/error.hpp"
#include "segrega/harmonic_field.hpp"
#include "segrega/models.hpp"

using namespace segrega;

namespace {

BoundaryFunction cos_mode(int j) {
  return [j](double t) { return std::cos(j * t); };
}

double max_coeff_except(const FourierField& f, int keep_a, int keep_b) {
  double m = 0.0;
  for (int j = 0; j <= f.truncation(); ++j) {
    if (j != keep_a) m = std::max(m, std::abs(f.A()[j]));
    if (j != keep_b) m = std::max(m, std::abs(f.B()[j]));
  }
  return m;
}

}  // namespace

TEST_CASE("cos(3 theta) has a single coefficient") {
  const auto f = solve_dirichlet(cos_mode(3), 64, QuadratureRule(1024));
  CHECK(f.A()[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_coeff_except(f, 3, -1) < 1e-12);
}

TEST_CASE("constant datum") {
  const auto f = solve_dirichlet([](double) { return 1.0; }, 32, QuadratureRule(256));
  CHECK(f.A()[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.eval(DiskPoint(0.3, -0.5)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("symmetric six-arc datum has no modes below three") {
  const AlternatingDatum a(AdmissibleDatum::symmetric(6));
  const auto f = solve_dirichlet(a);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(f.A()[j]) < 1e-12);
    CHECK(std::abs(f.B()[j]) < 1e-12);
  }
  CHECK(std::hypot(f.A()[3], f.B()[3]) > 0.1);
  // independent coefficients at 2^15 and 2^14 nodes
  for (int n : {1 << 15, 1 << 14}) {
    const double a3 = oracle::trapezoid([&](double t) { return a.eval(t) * std::cos(3 * t); }, n) / kPi;
    const double b3 = oracle::trapezoid([&](double t) { return a.eval(t) * std::sin(3 * t); }, n) / kPi;
    CHECK(f.A()[3] == doctest::Approx(a3).epsilon(1e-9));
    CHECK(f.B()[3] == doctest::Approx(b3).epsilon(1e-9));
  }
}

TEST_CASE("evaluation examples") {
  const auto f3 = solve_dirichlet(cos_mode(3), 16, QuadratureRule(256));
  const DiskPoint p(std::polar(0.7, 0.3));
  CHECK(f3.eval(p) == doctest::Approx(std::pow(0.7, 3) * std::cos(0.9)).epsilon(1e-13));
  const auto f1 = solve_dirichlet(cos_mode(1), 16, QuadratureRule(256));
  CHECK(f1.eval(DiskPoint(0.3, 0.4)) == doctest::Approx(0.3).epsilon(1e-13));

  std::mt19937_64 rng(9);
  const AlternatingDatum a(random_datum(6, rng));
  const auto f = solve_dirichlet(a);
  const double mean = oracle::piecewise_gauss([&](double t) { return a.eval(t); }, a.base().zeros()) / kTwoPi;
  CHECK(std::abs(f.eval(DiskPoint(0.0, 0.0)) - mean) < 1e-6);
  CHECK(f.eval(DiskPoint(0.0, 0.0)) == doctest::Approx(f.A()[0] / 2).epsilon(1e-15));
}

TEST_CASE("series agrees with the Poisson integral") {
  std::mt19937_64 rng(17);
  const AlternatingDatum a(random_datum(6, rng));
  const auto f = solve_dirichlet(a, 512, QuadratureRule(8192));
  for (int t = 0; t < 20; ++t) {
    const DiskPoint p(random_point(rng, 0.8));
    CHECK(f.eval(p) == doctest::Approx(poisson_eval(a.function(), p, QuadratureRule(8192))).epsilon(1e-6));
  }
}

TEST_CASE("derivative examples") {
  const DiskPoint o(0.0, 0.0);
  const auto f3 = solve_dirichlet(cos_mode(3), 16, QuadratureRule(256));
  CHECK(f3.gradient(o).norm() < 1e-14);
  CHECK(f3.hessian(o).norm() < 1e-14);
  const auto f1 = solve_dirichlet(cos_mode(1), 16, QuadratureRule(256));
  const DiskPoint p(0.2, -0.6);
  CHECK(f1.gradient(p).x1 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(f1.gradient(p).x2) < 1e-13);
  CHECK(f1.hessian(p).norm() < 1e-13);
  const auto f2 = solve_dirichlet(cos_mode(2), 16, QuadratureRule(256));
  const Sym2 h = f2.hessian(o);
  CHECK(h.h11 == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(h.h22 == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(std::abs(h.h12) < 1e-13);
  CHECK(f2.gradient(o).norm() < 1e-14);
}

TEST_CASE("derivatives match finite differences; Hessian is trace free") {
  std::mt19937_64 rng(23);
  const AlternatingDatum a(random_datum(8, rng));
  const auto f = solve_dirichlet(a, 128, QuadratureRule(2048));
  for (int t = 0; t < 100; ++t) {
    const Complex z = random_point(rng, 0.85);
    const double h1 = 1e-5;
    const double gx = (f.eval(z + h1) - f.eval(z - h1)) / (2 * h1);
    const double gy = (f.eval(z + Complex(0, h1)) - f.eval(z - Complex(0, h1))) / (2 * h1);
    const Vec2 g = f.gradient(z);
    const double gs = std::max(1.0, std::hypot(gx, gy));
    CHECK(std::abs(g.x1 - gx) < 1e-6 * gs);
    CHECK(std::abs(g.x2 - gy) < 1e-6 * gs);
    const double h2 = 1e-4;
    const Vec2 gxp = f.gradient(z + h2), gxm = f.gradient(z - h2);
    const Vec2 gyp = f.gradient(z + Complex(0, h2)), gym = f.gradient(z - Complex(0, h2));
    const Sym2 H = f.hessian(z);
    const double hs = std::max(1.0, H.norm());
    CHECK(std::abs(H.h11 - (gxp.x1 - gxm.x1) / (2 * h2)) < 1e-4 * hs);
    CHECK(std::abs(H.h12 - (gxp.x2 - gxm.x2) / (2 * h2)) < 1e-4 * hs);
    CHECK(std::abs(H.h22 - (gyp.x2 - gym.x2) / (2 * h2)) < 1e-4 * hs);
    CHECK(std::abs(H.trace()) < 1e-10 * hs);
  }
}

TEST_CASE("five-point Laplacian of the field is O(h^2)") {
  std::mt19937_64 rng(29);
  const AlternatingDatum a(random_datum(6, rng));
  const auto f = solve_dirichlet(a, 128, QuadratureRule(2048));
  const double h = 1e-3;
  for (int t = 0; t < 100; ++t) {
    const Complex z = random_point(rng, 0.8);
    const double lap = (f.eval(z + h) + f.eval(z - h) + f.eval(z + Complex(0, h)) + f.eval(z - Complex(0, h)) -
                        4 * f.eval(z)) /
                       (h * h);
    const double scale = std::max(1.0, f.hessian(z).norm());
    CHECK(std::abs(lap) < 1e-3 * scale);
  }
}

TEST_CASE("mean value property on inner circles") {
  std::mt19937_64 rng(31);
  const AlternatingDatum a(random_datum(4, rng));
  const auto f = solve_dirichlet(a, 256, QuadratureRule(4096));
  for (int t = 0; t < 10; ++t) {
    const Complex c = random_point(rng, 0.5);
    const double rho = 0.9 * (1.0 - std::abs(c)) * uniform01(rng);
    const double avg =
        oracle::trapezoid([&](double th) { return f.eval(c + std::polar(rho, th)); }, 512) / (2 * oracle::kPi);
    CHECK(avg == doctest::Approx(f.eval(c)).epsilon(1e-8));
  }
}

TEST_CASE("Lipschitz data decay like 1/j") {
  std::mt19937_64 rng(37);
  const AlternatingDatum a(random_datum(6, rng));
  const auto f = solve_dirichlet(a);
  const double c = f.decay_constant();
  for (int j = 1; j <= f.truncation(); ++j) CHECK(std::hypot(f.A()[j], f.B()[j]) <= c / j * (1 + 1e-12));
  CHECK(f.tail_energy() >= 0.0);
  CHECK(f.tail_energy() < 1e-6);
}

TEST_CASE("recenter examples") {
  const QuadratureRule rule(2048);
  std::mt19937_64 rng(41);
  const AlternatingDatum a(random_datum(6, rng));
  const auto f = solve_dirichlet(a, 256, rule);
  const auto g = recenter(f, DiskPoint(0.0, 0.0), 256, rule);
  for (int j = 0; j <= 256; ++j) {
    CHECK(std::abs(g.A()[j] - f.A()[j]) < 1e-12);
    CHECK(std::abs(g.B()[j] - f.B()[j]) < 1e-12);
  }
  const auto x1 = solve_dirichlet(cos_mode(1), 16, rule);
  CHECK(recenter(x1, DiskPoint(0.5, 0.0), 64, rule).eval(DiskPoint(0.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-12));
  const auto c3 = solve_dirichlet(cos_mode(3), 16, rule);
  CHECK(recenter(c3, DiskPoint(0.2, 0.0), 64, rule).A()[0] == doctest::Approx(0.016).epsilon(1e-12));
  // recentred value at 0 equals the value at p for a generic datum
  for (int t = 0; t < 5; ++t) {
    const DiskPoint p(random_point(rng, 0.6));
    CHECK(std::abs(recenter(a.function(), p, 256, QuadratureRule(8192)).eval(DiskPoint(0.0, 0.0)) - f.eval(p)) <
          1e-6);
  }
}

TEST_CASE("critical points of cos(s theta)") {
  for (int s = 2; s <= 4; ++s) {
    for (const auto& f : {solve_dirichlet(cos_mode(s), 64, QuadratureRule(1024)), solve_dirichlet(cos_mode(s))}) {
      const auto res = find_zero_critical_points(f, s);
      REQUIRE(res.points.size() == 1);
      CHECK(res.points[0].location.norm() < 1e-6);
      CHECK(res.points[0].order == s);
    }
  }
}

TEST_CASE("x1 has no critical points") {
  const auto f = solve_dirichlet(cos_mode(1), 16, QuadratureRule(256));
  CHECK(find_zero_critical_points(f, 1).points.empty());
}

TEST_CASE("Re(z^2) against brute-force minimisation of |psi| + |grad psi|") {
  const auto f = solve_dirichlet(cos_mode(2), 16, QuadratureRule(256));
  const auto res = find_zero_critical_points(f, 3);
  REQUIRE(res.points.size() == 1);
  CHECK(res.points[0].order == 2);
  // brute force: x1^2 - x2^2 and its gradient (2 x1, -2 x2) written out
  double best = 1e300;
  Complex arg;
  for (int i = -200; i <= 200; ++i) {
    for (int j = -200; j <= 200; ++j) {
      const double x = i / 210.0, y = j / 210.0;
      if (x * x + y * y >= 1) continue;
      const double v = std::abs(x * x - y * y) + std::hypot(2 * x, 2 * y);
      if (v < best) {
        best = v;
        arg = {x, y};
      }
    }
  }
  CHECK(std::abs(res.points[0].location.z() - arg) < 1.0 / 210.0);
}

TEST_CASE("more critical points than s - 1 is a hard error") {
  const auto f = solve_dirichlet(cos_mode(3), 16, QuadratureRule(256));
  try {
    find_zero_critical_points(f, 1);
    FAIL("expected TooManyCriticalPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyCriticalPoints);
  }
}

TEST_CASE("random alternating data stay within s - 1 critical points") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 6; ++t) {
    const int s = 2 + t % 3;
    const AlternatingDatum a(random_datum(2 * s, rng));
    const auto res = find_zero_critical_points(solve_dirichlet(a), s);
    CHECK(static_cast<int>(res.points.size()) <= s - 1);
    for (const auto& cp : res.points) CHECK(cp.order >= 2);
  }
}
