#include "segrega/kernels.hpp"

#include <cassert>
#include <cmath>

#include "segrega/error.hpp"

namespace segrega {

namespace {

double clamp_unit(double x) {
  constexpr double kSlack = 1e-12;
  if (x > 1.0 && x <= 1.0 + kSlack) return 1.0;
  if (x < -1.0 && x >= -1.0 - kSlack) return -1.0;
  return x;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

}  // namespace

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

DiskPoint::DiskPoint(double x1, double x2, double boundary_eps) : z_(x1, x2) {
  if (!(std::abs(z_) < 1.0 - boundary_eps)) {
    throw Error(ErrorCode::BoundaryPoint, "point (" + std::to_string(x1) + ", " + std::to_string(x2) +
                                              ") is not strictly inside the unit disk");
  }
}

double chebyshev_T(int degree, double x) {
  if (degree < 0) throw Error(ErrorCode::NegativeDegree, "chebyshev_T degree " + std::to_string(degree));
  x = clamp_unit(x);
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < degree; ++j) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double chebyshev_U(int degree, double x) {
  if (degree < 0) throw Error(ErrorCode::NegativeDegree, "chebyshev_U degree " + std::to_string(degree));
  x = clamp_unit(x);
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int j = 1; j < degree; ++j) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> monomial_in_T(int degree) {
  if (degree < 0) throw Error(ErrorCode::NegativeDegree, "monomial_in_T degree " + std::to_string(degree));
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  const double scale = std::ldexp(1.0, 1 - degree);
  for (int i = degree; i >= 0; i -= 2) {
    double v = scale * binomial(degree, (degree - i) / 2);
    if (i == 0) v *= 0.5;
    c[static_cast<std::size_t>(i)] = v;
  }
  return c;
}

std::vector<double> monomial_in_U(int degree) {
  const std::vector<double> t = monomial_in_T(degree);
  std::vector<double> u(t.size(), 0.0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] == 0.0) continue;
    if (k == 0) {
      u[0] += t[0];
    } else if (k == 1) {
      u[1] += 0.5 * t[1];
    } else {
      u[k] += 0.5 * t[k];
      u[k - 2] -= 0.5 * t[k];
    }
  }
  return u;
}

Complex moebius(const DiskPoint& p, Complex zeta) {
  const Complex pz = p.z();
  const Complex denom = std::conj(pz) * zeta + 1.0;
  // |p| < 1 and |zeta| <= 1 keep the pole -1/conj(p) off the closed disk.
  assert(std::abs(denom) > 0.0);
  if (denom == Complex(0.0, 0.0)) throw Error(ErrorCode::PoleOnDisk, "moebius denominator vanished");
  return (zeta + pz) / denom;
}

QuadratureRule::QuadratureRule(std::size_t n_nodes) : n_(n_nodes) {
  if (n_ == 0) throw Error(ErrorCode::EmptyRule, "quadrature rule needs at least one node");
  cos_.resize(n_);
  sin_.resize(n_);
  for (std::size_t q = 0; q < n_; ++q) {
    const double t = kTwoPi * static_cast<double>(q) / static_cast<double>(n_);
    cos_[q] = std::cos(t);
    sin_[q] = std::sin(t);
  }
  // Pin the exact values the table would otherwise miss by an ulp.
  if (n_ % 4 == 0) {
    cos_[n_ / 4] = 0.0;
    cos_[3 * n_ / 4] = 0.0;
    sin_[n_ / 2] = 0.0;
  }
}

double QuadratureRule::cos_index(long long q) const {
  const long long n = static_cast<long long>(n_);
  long long r = q % n;
  if (r < 0) r += n;
  return cos_[static_cast<std::size_t>(r)];
}

double QuadratureRule::sin_index(long long q) const {
  const long long n = static_cast<long long>(n_);
  long long r = q % n;
  if (r < 0) r += n;
  return sin_[static_cast<std::size_t>(r)];
}

double circle_integral(std::span<const double> samples, const QuadratureRule& rule) {
  if (samples.size() != rule.size()) {
    throw Error(ErrorCode::EmptyRule, "sample count does not match quadrature rule");
  }
  double sum = 0.0;
  for (double v : samples) sum += v;
  return sum * rule.weight();
}

double circle_integral(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t m = 0; m < rule.size(); ++m) sum += f(rule.node(m));
  return sum * rule.weight();
}

}  // namespace segrega
