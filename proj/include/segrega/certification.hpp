#pragma once

#include <string>
#include <vector>

#include "segrega/boundary_datum.hpp"
#include "segrega/harmonic_field.hpp"
#include "segrega/kernels.hpp"

namespace segrega {

struct CertifyTolerances {
  /// Moments pass when |moment| < moment_rel * amplitude * 2pi.
  double moment_rel = 1e-8;
  /// (A_s, B_s) counts as nonzero when its norm exceeds order_rel * amplitude.
  double order_rel = 1e-6;
  /// Value, gradient and Hessian pass when below derivative_rel * amplitude.
  double derivative_rel = 1e-8;
};

struct NamedMoment {
  std::string name;
  double value = 0.0;
};

/// Boundary moments of the pulled-back alternating datum at a point p.
struct MomentReport {
  DiskPoint p;
  int s = 0;
  /// int Phi^a(R_p zeta) T_j(zeta_1) ds, j = 0..s-1.
  std::vector<double> cheb_T;
  /// int Phi^a(R_p zeta) zeta_2 U_{j-1}(zeta_1) ds, j = 1..s-1 (entry j-1).
  std::vector<double> cheb_U;
  /// int Phi^a(R_p zeta) zeta_1^{j-h} zeta_2^h ds, 0 <= h <= j <= s-1, named "m_j_h".
  std::vector<NamedMoment> monomial;
  /// Per-condition sums for the k = 6 form, named C1, C2_1, C2_2, C3, C4.
  std::vector<NamedMoment> conditions;
  double cheb_max_abs = 0.0;
  double monomial_max_abs = 0.0;
  double max_abs = 0.0;
  double tolerance = 0.0;
  bool cheb_verdict = false;
  bool monomial_verdict = false;
  bool verdict = false;
};

/// Pulled-back boundary samples Phi^a(R_p(zeta_m)) at the rule nodes.
std::vector<double> pulled_back_samples(const BoundaryFunction& phi_a, const DiskPoint& p, const QuadratureRule& rule);

/// Largest |Phi^a| at the rule nodes; the default moment scale for plain functions.
double sampled_amplitude(const BoundaryFunction& phi_a, const QuadratureRule& rule);

MomentReport chebyshev_moments(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                               double amplitude, const CertifyTolerances& tol = {});
MomentReport chebyshev_moments(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                               const CertifyTolerances& tol = {});

MomentReport monomial_moments(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                              double amplitude, const CertifyTolerances& tol = {});
MomentReport monomial_moments(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                              const CertifyTolerances& tol = {});

/// Both moment families in one pass; verdict is the monomial verdict.
MomentReport all_moments(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                         double amplitude, const CertifyTolerances& tol = {});

/// Monomial moments rebuilt from the Chebyshev moments alone, through the
/// inverse expansion of zeta_1^n in T_i and U_i. Same ordering as `monomial`.
std::vector<NamedMoment> monomials_from_chebyshev(const MomentReport& report);

struct TwoSPointResult {
  bool is_2s_point = false;
  MomentReport moments;
  /// Recentered order-s coefficients (A_s, B_s).
  double a_s = 0.0;
  double b_s = 0.0;
  bool leading_nonzero = false;
  /// Chebyshev and monomial verdicts agree.
  bool equivalent = true;
};

/// p is a 2s-point of |psi_a| iff every monomial moment vanishes; the order-s
/// pair must then be nonzero, otherwise DegenerateDatum is raised.
TwoSPointResult is_2s_point(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                            double amplitude, const CertifyTolerances& tol = {});
TwoSPointResult is_2s_point(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                            const CertifyTolerances& tol = {});

/// Conditions C1..C4 for six species, summed per species with signs (-1)^j.
MomentReport k6_conditions(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                           const CertifyTolerances& tol = {});

struct DerivativeReport {
  DiskPoint p;
  double value = 0.0;
  Vec2 gradient;
  Sym2 hessian;
  double tolerance = 0.0;
  bool verdict = false;
};

/// psi_a, grad psi_a and the Hessian at p from the series; verdict when all vanish.
DerivativeReport derivative_characterization(const FourierField& field, const DiskPoint& p, double amplitude,
                                             const CertifyTolerances& tol = {});

/// The same derivatives from boundary integrals of the pulled-back datum at the
/// recentered origin, mapped back through the Jacobian of R_p^{-1}.
DerivativeReport pullback_derivatives(const BoundaryFunction& phi_a, const DiskPoint& p, const QuadratureRule& rule,
                                      double amplitude, const CertifyTolerances& tol = {});

}  // namespace segrega
