#include "segrega/certification.hpp"

#include <algorithm>
#include <cmath>

#include "segrega/error.hpp"

namespace segrega {

namespace {

Complex node_point(const QuadratureRule& rule, std::size_t m) {
  const auto q = static_cast<long long>(m);
  return {rule.cos_index(q), rule.sin_index(q)};
}

std::string monomial_name(int j, int h) { return "m_" + std::to_string(j) + "_" + std::to_string(h); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_s(int s) {
  if (s < 1) throw Error(ErrorCode::OddSpeciesCount, "half species count s must be at least 1");
}

// Fills cheb_T, cheb_U and/or monomial from pulled-back samples.
void fill_moments(MomentReport& r, const std::vector<double>& samples, const QuadratureRule& rule, bool cheb,
                  bool mono) {
  const int s = r.s;
  const double w = rule.weight();
  if (cheb) {
    r.cheb_T.assign(static_cast<std::size_t>(s), 0.0);
    r.cheb_U.assign(static_cast<std::size_t>(std::max(0, s - 1)), 0.0);
  }
  std::vector<double> mono_vals;
  if (mono) mono_vals.assign(static_cast<std::size_t>(s * (s + 1) / 2), 0.0);

  std::vector<double> pow1(static_cast<std::size_t>(s) + 1);
  std::vector<double> pow2(static_cast<std::size_t>(s) + 1);
  for (std::size_t m = 0; m < samples.size(); ++m) {
    const double f = samples[m] * w;
    if (f == 0.0) continue;
    const Complex zeta = node_point(rule, m);
    const double z1 = zeta.real();
    const double z2 = zeta.imag();
    if (cheb) {
      for (int j = 0; j < s; ++j) r.cheb_T[static_cast<std::size_t>(j)] += f * chebyshev_T(j, z1);
      for (int j = 1; j < s; ++j) r.cheb_U[static_cast<std::size_t>(j - 1)] += f * z2 * chebyshev_U(j - 1, z1);
    }
    if (mono) {
      pow1[0] = pow2[0] = 1.0;
      for (int e = 1; e <= s; ++e) {
        pow1[static_cast<std::size_t>(e)] = pow1[static_cast<std::size_t>(e - 1)] * z1;
        pow2[static_cast<std::size_t>(e)] = pow2[static_cast<std::size_t>(e - 1)] * z2;
      }
      std::size_t idx = 0;
      for (int j = 0; j < s; ++j) {
        for (int h = 0; h <= j; ++h) {
          mono_vals[idx++] += f * pow1[static_cast<std::size_t>(j - h)] * pow2[static_cast<std::size_t>(h)];
        }
      }
    }
  }
  if (mono) {
    r.monomial.clear();
    std::size_t idx = 0;
    for (int j = 0; j < s; ++j) {
      for (int h = 0; h <= j; ++h) r.monomial.push_back({monomial_name(j, h), mono_vals[idx++]});
    }
  }
}

void finish_verdicts(MomentReport& r) {
  r.cheb_max_abs = std::max(max_abs_of(r.cheb_T), max_abs_of(r.cheb_U));
  r.monomial_max_abs = 0.0;
  for (const auto& m : r.monomial) r.monomial_max_abs = std::max(r.monomial_max_abs, std::abs(m.value));
  r.cheb_verdict = r.cheb_max_abs < r.tolerance;
  r.monomial_verdict = r.monomial_max_abs < r.tolerance;
}

}  // namespace

std::vector<double> pulled_back_samples(const BoundaryFunction& phi_a, const DiskPoint& p, const QuadratureRule& rule) {
  std::vector<double> out(rule.size());
  for (std::size_t m = 0; m < rule.size(); ++m) out[m] = phi_a(std::arg(moebius(p, node_point(rule, m))));
  return out;
}

double sampled_amplitude(const BoundaryFunction& phi_a, const QuadratureRule& rule) {
  double a = 0.0;
  for (std::size_t m = 0; m < rule.size(); ++m) a = std::max(a, std::abs(phi_a(rule.node(m))));
  return a;
}

MomentReport chebyshev_moments(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                               double amplitude, const CertifyTolerances& tol) {
  check_s(s);
  MomentReport r;
  r.p = p;
  r.s = s;
  r.tolerance = tol.moment_rel * amplitude * kTwoPi;
  fill_moments(r, pulled_back_samples(phi_a, p, rule), rule, true, false);
  finish_verdicts(r);
  r.max_abs = r.cheb_max_abs;
  r.verdict = r.cheb_verdict;
  return r;
}

MomentReport chebyshev_moments(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                               const CertifyTolerances& tol) {
  return chebyshev_moments(datum.function(), p, datum.s(), rule, datum.base().max_amplitude(), tol);
}

MomentReport monomial_moments(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                              double amplitude, const CertifyTolerances& tol) {
  check_s(s);
  MomentReport r;
  r.p = p;
  r.s = s;
  r.tolerance = tol.moment_rel * amplitude * kTwoPi;
  fill_moments(r, pulled_back_samples(phi_a, p, rule), rule, false, true);
  finish_verdicts(r);
  r.max_abs = r.monomial_max_abs;
  r.verdict = r.monomial_verdict;
  return r;
}

MomentReport monomial_moments(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                              const CertifyTolerances& tol) {
  return monomial_moments(datum.function(), p, datum.s(), rule, datum.base().max_amplitude(), tol);
}

MomentReport all_moments(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                         double amplitude, const CertifyTolerances& tol) {
  check_s(s);
  MomentReport r;
  r.p = p;
  r.s = s;
  r.tolerance = tol.moment_rel * amplitude * kTwoPi;
  fill_moments(r, pulled_back_samples(phi_a, p, rule), rule, true, true);
  finish_verdicts(r);
  r.max_abs = std::max(r.cheb_max_abs, r.monomial_max_abs);
  r.verdict = r.monomial_verdict;
  return r;
}

std::vector<NamedMoment> monomials_from_chebyshev(const MomentReport& report) {
  const int s = report.s;
  std::vector<NamedMoment> out;
  for (int j = 0; j < s; ++j) {
    for (int h = 0; h <= j; ++h) {
      const int ell = h / 2;
      // zeta_2^{2 ell} = (1 - zeta_1^2)^ell on the circle; collect the power
      // series in zeta_1 of the remaining factor.
      const int base = j - h;
      std::vector<double> poly(static_cast<std::size_t>(j) + 1, 0.0);
      for (int i = 0; i <= ell; ++i) {
        const double c = binomial(ell, i) * ((i % 2 == 0) ? 1.0 : -1.0);
        poly[static_cast<std::size_t>(base + 2 * i)] += c;
      }
      double value = 0.0;
      if (h % 2 == 0) {
        // Degree j polynomial in zeta_1 -> T basis -> T moments.
        std::vector<double> tcoef(static_cast<std::size_t>(j) + 1, 0.0);
        for (int n = 0; n <= j; ++n) {
          const double pn = poly[static_cast<std::size_t>(n)];
          if (pn == 0.0) continue;
          const auto cn = monomial_in_T(n);
          for (std::size_t i = 0; i < cn.size(); ++i) tcoef[i] += pn * cn[i];
        }
        for (std::size_t i = 0; i < tcoef.size(); ++i) value += tcoef[i] * report.cheb_T[i];
      } else {
        // zeta_2 times a degree j-1 polynomial -> U basis -> U moments.
        std::vector<double> ucoef(static_cast<std::size_t>(j), 0.0);
        for (int n = 0; n <= j - 1; ++n) {
          const double pn = poly[static_cast<std::size_t>(n)];
          if (pn == 0.0) continue;
          const auto dn = monomial_in_U(n);
          for (std::size_t i = 0; i < dn.size(); ++i) ucoef[i] += pn * dn[i];
        }
        for (std::size_t kappa = 0; kappa < ucoef.size(); ++kappa) value += ucoef[kappa] * report.cheb_U[kappa];
      }
      out.push_back({monomial_name(j, h), value});
    }
  }
  return out;
}

TwoSPointResult is_2s_point(const BoundaryFunction& phi_a, const DiskPoint& p, int s, const QuadratureRule& rule,
                            double amplitude, const CertifyTolerances& tol) {
  check_s(s);
  const auto samples = pulled_back_samples(phi_a, p, rule);
  TwoSPointResult out;
  out.moments.p = p;
  out.moments.s = s;
  out.moments.tolerance = tol.moment_rel * amplitude * kTwoPi;
  fill_moments(out.moments, samples, rule, true, true);
  finish_verdicts(out.moments);
  out.moments.max_abs = std::max(out.moments.cheb_max_abs, out.moments.monomial_max_abs);
  out.moments.verdict = out.moments.monomial_verdict;
  out.equivalent = out.moments.cheb_verdict == out.moments.monomial_verdict;

  double as = 0.0;
  double bs = 0.0;
  for (std::size_t m = 0; m < samples.size(); ++m) {
    const Complex zeta = node_point(rule, m);
    as += samples[m] * chebyshev_T(s, zeta.real());
    bs += samples[m] * zeta.imag() * chebyshev_U(s - 1, zeta.real());
  }
  out.a_s = as * rule.weight() / kPi;
  out.b_s = bs * rule.weight() / kPi;
  out.leading_nonzero = std::hypot(out.a_s, out.b_s) > tol.order_rel * amplitude;

  if (out.moments.monomial_verdict && !out.leading_nonzero) {
    throw Error(ErrorCode::DegenerateDatum,
                "all moments below order " + std::to_string(s) + " vanish and so does (A_s, B_s); the datum "
                "does not have exactly 2s sign changes");
  }
  out.is_2s_point = out.moments.monomial_verdict && out.leading_nonzero;
  return out;
}

TwoSPointResult is_2s_point(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                            const CertifyTolerances& tol) {
  return is_2s_point(datum.function(), p, datum.s(), rule, datum.base().max_amplitude(), tol);
}

MomentReport k6_conditions(const AlternatingDatum& datum, const DiskPoint& p, const QuadratureRule& rule,
                           const CertifyTolerances& tol) {
  if (datum.k() != 6) {
    throw Error(ErrorCode::SpeciesCountNot6, "k6_conditions needs six species, got " + std::to_string(datum.k()));
  }
  const AdmissibleDatum& base = datum.base();
  // Per-species integrals of phi_j(R_p zeta) against 1, zeta_1, zeta_2, zeta_1^2, zeta_1 zeta_2.
  double per[6][5] = {};
  for (std::size_t m = 0; m < rule.size(); ++m) {
    const Complex zeta = node_point(rule, m);
    const double theta = std::arg(moebius(p, zeta));
    const int j = base.species_at(theta);
    const double v = base.species(j, theta) * rule.weight();
    if (v == 0.0) continue;
    const double z1 = zeta.real();
    const double z2 = zeta.imag();
    double* row = per[j];
    row[0] += v;
    row[1] += v * z1;
    row[2] += v * z2;
    row[3] += v * z1 * z1;
    row[4] += v * z1 * z2;
  }
  double c[5] = {};
  for (int j = 0; j < 6; ++j) {
    for (int q = 0; q < 5; ++q) c[q] += AlternatingDatum::sign(j) * per[j][q];
  }
  MomentReport r;
  r.p = p;
  r.s = 3;
  r.tolerance = tol.moment_rel * base.max_amplitude() * kTwoPi;
  r.conditions = {{"C1", c[0]}, {"C2_1", c[1]}, {"C2_2", c[2]}, {"C3", c[3]}, {"C4", c[4]}};
  for (const auto& nm : r.conditions) r.max_abs = std::max(r.max_abs, std::abs(nm.value));
  r.verdict = r.max_abs < r.tolerance;
  r.monomial_verdict = r.verdict;
  r.monomial_max_abs = r.max_abs;
  return r;
}

DerivativeReport derivative_characterization(const FourierField& field, const DiskPoint& p, double amplitude,
                                             const CertifyTolerances& tol) {
  DerivativeReport r;
  r.p = p;
  const auto j = field.jet(p.z());
  r.value = j.f.real();
  r.gradient = {j.df.real(), -j.df.imag()};
  r.hessian = {j.d2f.real(), -j.d2f.imag(), -j.d2f.real()};
  r.tolerance = tol.derivative_rel * amplitude;
  r.verdict = std::abs(r.value) < r.tolerance && r.gradient.norm() < r.tolerance && r.hessian.norm() < r.tolerance;
  return r;
}

DerivativeReport pullback_derivatives(const BoundaryFunction& phi_a, const DiskPoint& p, const QuadratureRule& rule,
                                      double amplitude, const CertifyTolerances& tol) {
  const auto samples = pulled_back_samples(phi_a, p, rule);
  double i0 = 0.0, i1 = 0.0, i2 = 0.0, i11 = 0.0, i22 = 0.0, i12 = 0.0;
  for (std::size_t m = 0; m < samples.size(); ++m) {
    const Complex eta = node_point(rule, m);
    const double f = samples[m];
    i0 += f;
    i1 += f * eta.real();
    i2 += f * eta.imag();
    i11 += f * eta.real() * eta.real();
    i22 += f * eta.imag() * eta.imag();
    i12 += f * eta.real() * eta.imag();
  }
  const double w = rule.weight();
  i0 *= w;
  i1 *= w;
  i2 *= w;
  i11 *= w;
  i22 *= w;
  i12 *= w;

  // Derivatives of psi o R_p at the origin.
  const double v0 = i0 / kTwoPi;
  const double d1 = i1 / kPi;
  const double d2 = i2 / kPi;
  const double h11 = -2.0 / kPi * i0 + 4.0 / kPi * i11;
  const double h22 = -2.0 / kPi * i0 + 4.0 / kPi * i22;
  const double h12 = 4.0 / kPi * i12;

  // Back to x = R_p(zeta): S = R_p^{-1} has S'(p) = g and S''(p) = 2 conj(p) g^2.
  const double p1 = p.x1();
  const double p2 = p.x2();
  const double g = 1.0 / (1.0 - std::norm(p.z()));
  DerivativeReport r;
  r.p = p;
  r.value = v0;
  r.gradient = {g * d1, g * d2};
  const double c = 2.0 * g * g;
  r.hessian.h11 = g * g * h11 + c * (d1 * p1 - d2 * p2);
  r.hessian.h12 = g * g * h12 + c * (d1 * p2 + d2 * p1);
  r.hessian.h22 = g * g * h22 + c * (-d1 * p1 + d2 * p2);
  r.tolerance = tol.derivative_rel * amplitude;
  r.verdict = std::abs(r.value) < r.tolerance && r.gradient.norm() < r.tolerance && r.hessian.norm() < r.tolerance;
  return r;
}

}  // namespace segrega
