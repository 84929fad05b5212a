#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace segrega {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Maps any angle to [0, 2pi).
double normalize_angle(double theta);

/// A point strictly inside the unit disk.
class DiskPoint {
 public:
  static constexpr double kBoundaryEps = 1e-12;

  DiskPoint() = default;
  /// Throws BoundaryPoint when |(x1,x2)| >= 1 - boundary_eps.
  DiskPoint(double x1, double x2, double boundary_eps = kBoundaryEps);
  explicit DiskPoint(Complex z, double boundary_eps = kBoundaryEps)
      : DiskPoint(z.real(), z.imag(), boundary_eps) {}

  double x1() const { return z_.real(); }
  double x2() const { return z_.imag(); }
  Complex z() const { return z_; }
  double norm() const { return std::abs(z_); }

 private:
  Complex z_{0.0, 0.0};
};

struct CirclePoint {
  double theta = 0.0;
  Complex zeta() const { return std::polar(1.0, theta); }
};

// Chebyshev polynomials, evaluated by the three-term recurrence. Arguments
// within 1e-12 outside [-1, 1] are clamped.
double chebyshev_T(int degree, double x);
double chebyshev_U(int degree, double x);

/// Coefficients c_0..c_j with x^j = sum_i c_i T_i(x). The i = 0 term is
/// already halved.
std::vector<double> monomial_in_T(int degree);

/// Coefficients d_0..d_j with x^j = sum_i d_i U_i(x), obtained from
/// monomial_in_T via T_0 = U_0, T_1 = U_1/2, T_k = (U_k - U_{k-2})/2.
std::vector<double> monomial_in_U(int degree);

/// Disk automorphism zeta -> (zeta + p) / (conj(p) zeta + 1); sends 0 to p and
/// the unit circle onto itself.
Complex moebius(const DiskPoint& p, Complex zeta);

/// Uniform periodic trapezoid rule on the circle.
class QuadratureRule {
 public:
  static constexpr std::size_t kDefaultNodes = 4096;

  explicit QuadratureRule(std::size_t n_nodes = kDefaultNodes);

  std::size_t size() const { return n_; }
  double node(std::size_t m) const { return kTwoPi * static_cast<double>(m) / static_cast<double>(n_); }
  double weight() const { return kTwoPi / static_cast<double>(n_); }

  /// cos(2 pi q / n) and sin(2 pi q / n) for integer q, reduced mod n. Exact
  /// table lookups keep Fourier sums free of accumulated phase error.
  double cos_index(long long q) const;
  double sin_index(long long q) const;

 private:
  std::size_t n_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// sum_m f(theta_m) * 2pi/n over samples taken at the rule's nodes.
double circle_integral(std::span<const double> samples, const QuadratureRule& rule);
double circle_integral(const std::function<double(double)>& f, const QuadratureRule& rule);

}  // namespace segrega
