#pragma once

#include <cstddef>
#include <vector>

#include "segrega/boundary_datum.hpp"
#include "segrega/kernels.hpp"

namespace segrega {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;
  double norm() const;
};

/// Symmetric 2x2 matrix [[h11, h12], [h12, h22]].
struct Sym2 {
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;
  double trace() const { return h11 + h22; }
  double det() const { return h11 * h22 - h12 * h12; }
  /// Frobenius norm.
  double norm() const;
};

/// Truncated harmonic series
///   psi(r, theta) = A_0/2 + sum_{j=1..N} (A_j cos(j theta) + B_j sin(j theta)) r^j,
/// i.e. the real part of the polynomial f(z) = A_0/2 + sum_j (A_j - i B_j) z^j.
class FourierField {
 public:
  FourierField() = default;
  /// `a` and `b` have equal length N + 1; b[0] is ignored and stored as 0.
  FourierField(std::vector<double> a, std::vector<double> b);

  int truncation() const { return static_cast<int>(a_.size()) - 1; }
  const std::vector<double>& A() const { return a_; }
  const std::vector<double>& B() const { return b_; }

  /// Boundary L2 root-mean-square, by Parseval.
  double scale() const;
  /// Tail energy sum_{j>N} (A_j^2 + B_j^2) extrapolated from the last two octaves.
  double tail_energy() const { return tail_energy_; }
  /// max_j j * |(A_j, B_j)|, the constant of the 1/j decay bound.
  double decay_constant() const;

  // Evaluation on the closed disk. The DiskPoint overloads are the public
  // contract; the Complex ones skip the interior check and serve boundary traces.
  double eval(const DiskPoint& p) const { return eval(p.z()); }
  Vec2 gradient(const DiskPoint& p) const { return gradient(p.z()); }
  Sym2 hessian(const DiskPoint& p) const { return hessian(p.z()); }
  double eval(Complex z) const;
  Vec2 gradient(Complex z) const;
  Sym2 hessian(Complex z) const;

  /// f(z), f'(z), f''(z) for the holomorphic polynomial behind psi.
  struct Jet {
    Complex f;
    Complex df;
    Complex d2f;
    Complex d3f;
  };
  Jet jet(Complex z) const;

  void set_tail_energy(double e) { tail_energy_ = e; }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  double tail_energy_ = 0.0;
};

inline constexpr int kDefaultTruncation = 256;

/// Harmonic extension of a boundary function: A_j, B_j by trapezoid quadrature.
FourierField solve_dirichlet(const BoundaryFunction& boundary, int truncation = kDefaultTruncation,
                             const QuadratureRule& rule = QuadratureRule());
FourierField solve_dirichlet(const AlternatingDatum& datum, int truncation = kDefaultTruncation,
                             const QuadratureRule& rule = QuadratureRule());
/// Same, from samples taken at the rule's nodes.
FourierField solve_dirichlet_samples(const std::vector<double>& samples, int truncation, const QuadratureRule& rule);

/// theta -> boundary(arg R_p(e^{i theta})).
BoundaryFunction pullback(const BoundaryFunction& boundary, const DiskPoint& p);

/// Fourier field of psi o R_p, built from the field's own boundary trace.
FourierField recenter(const FourierField& field, const DiskPoint& p, int truncation = kDefaultTruncation,
                      const QuadratureRule& rule = QuadratureRule());
/// Fourier field of (boundary o R_p), sampled from the boundary data directly.
FourierField recenter(const BoundaryFunction& boundary, const DiskPoint& p, int truncation = kDefaultTruncation,
                      const QuadratureRule& rule = QuadratureRule());

/// Direct Poisson-kernel quadrature (1-|z|^2)/(2pi) int phi(eta)/|z-eta|^2 ds.
double poisson_eval(const BoundaryFunction& boundary, const DiskPoint& p,
                    const QuadratureRule& rule = QuadratureRule());

/// Smallest j >= 1 whose coefficient pair exceeds tol_order * scale.
int leading_order(const FourierField& field, double tol_order, double scale);

struct CriticalPoint {
  DiskPoint location;
  double residual_value = 0.0;
  double residual_gradient = 0.0;
  int order = 0;
};

struct CriticalSearchOptions {
  int seeds_r = 64;
  int seeds_theta = 64;
  /// Absolute tolerances, multiplied by the field scale.
  double tol_value = 1e-8;
  double tol_grad = 1e-8;
  double tol_order = 1e-6;
  double dedup_radius = 1e-4;
  double boundary_margin = 1e-6;
  int max_newton_iterations = 400;
  /// Hessian determinant below which Newton falls back to Armijo descent.
  double singular_det = 1e-10;
  int quadrature_nodes = static_cast<int>(QuadratureRule::kDefaultNodes);
  unsigned threads = 1;
};

struct CriticalSearchResult {
  std::vector<CriticalPoint> points;
  int seeds = 0;
  int diverged_seeds = 0;
};

/// Zero-level critical points of psi in the open disk. Seeds come from a polar
/// grid; Newton runs on grad psi. At most s-1 such points exist for an
/// alternating datum with k = 2s; more raises TooManyCriticalPoints.
CriticalSearchResult find_zero_critical_points(const FourierField& field, int s,
                                               const CriticalSearchOptions& options = {});

}  // namespace segrega
