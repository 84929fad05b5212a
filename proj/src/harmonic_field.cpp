#include "segrega/harmonic_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "segrega/error.hpp"
#include "segrega/log.hpp"
#include "segrega/parallel.hpp"

namespace segrega {

double Vec2::norm() const { return std::hypot(x1, x2); }

double Sym2::norm() const { return std::sqrt(h11 * h11 + 2.0 * h12 * h12 + h22 * h22); }

FourierField::FourierField(std::vector<double> a, std::vector<double> b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.empty() || a_.size() != b_.size()) {
    throw Error(ErrorCode::TruncationTooSmall, "coefficient vectors must be nonempty and of equal length");
  }
  b_[0] = 0.0;
}

double FourierField::scale() const {
  if (a_.empty()) return 0.0;
  double e = 0.25 * a_[0] * a_[0];
  for (std::size_t j = 1; j < a_.size(); ++j) e += 0.5 * (a_[j] * a_[j] + b_[j] * b_[j]);
  return std::sqrt(e);
}

double FourierField::decay_constant() const {
  double c = 0.0;
  for (std::size_t j = 1; j < a_.size(); ++j) c = std::max(c, static_cast<double>(j) * std::hypot(a_[j], b_[j]));
  return c;
}

FourierField::Jet FourierField::jet(Complex z) const {
  // Horner for f and its first three derivatives together.
  Jet out{Complex(0.0), Complex(0.0), Complex(0.0), Complex(0.0)};
  for (std::size_t j = a_.size(); j-- > 1;) {
    const Complex c(a_[j], -b_[j]);
    out.d3f = out.d3f * z + 3.0 * out.d2f;
    out.d2f = out.d2f * z + 2.0 * out.df;
    out.df = out.df * z + out.f;
    out.f = out.f * z + c;
  }
  out.d3f = out.d3f * z + 3.0 * out.d2f;
  out.d2f = out.d2f * z + 2.0 * out.df;
  out.df = out.df * z + out.f;
  out.f = out.f * z + Complex(0.5 * a_[0], 0.0);
  return out;
}

double FourierField::eval(Complex z) const { return jet(z).f.real(); }

Vec2 FourierField::gradient(Complex z) const {
  const Complex d = jet(z).df;
  return {d.real(), -d.imag()};
}

Sym2 FourierField::hessian(Complex z) const {
  const Complex d2 = jet(z).d2f;
  return {d2.real(), -d2.imag(), -d2.real()};
}

namespace {

// Energy per octave decays geometrically for the data we handle; extrapolate
// the tail from the last two octaves.
double estimate_tail(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size() - 1;
  if (n < 4) return 0.0;
  auto energy = [&](std::size_t lo, std::size_t hi) {
    double e = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) e += a[j] * a[j] + b[j] * b[j];
    return e;
  };
  const double last = energy(n / 2 + 1, n);
  const double prev = energy(n / 4 + 1, n / 2);
  if (prev <= 0.0) return last;
  const double ratio = last / prev;
  if (ratio >= 1.0) return last * 1e6;  // not decaying: report something large
  return last * ratio / (1.0 - ratio);
}

}  // namespace

FourierField solve_dirichlet_samples(const std::vector<double>& samples, int truncation, const QuadratureRule& rule) {
  if (truncation < 1) {
    throw Error(ErrorCode::TruncationTooSmall, "truncation must be at least 1, got " + std::to_string(truncation));
  }
  if (samples.size() != rule.size()) throw Error(ErrorCode::EmptyRule, "sample count does not match the rule");
  const auto n_coef = static_cast<std::size_t>(truncation) + 1;
  std::vector<double> a(n_coef, 0.0);
  std::vector<double> b(n_coef, 0.0);
  const double w = rule.weight() / kPi;
  for (std::size_t j = 0; j < n_coef; ++j) {
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t m = 0; m < samples.size(); ++m) {
      const auto q = static_cast<long long>(j * m);
      sa += samples[m] * rule.cos_index(q);
      sb += samples[m] * rule.sin_index(q);
    }
    a[j] = sa * w;
    b[j] = sb * w;
  }
  FourierField field(std::move(a), std::move(b));
  const double tail = estimate_tail(field.A(), field.B());
  field.set_tail_energy(tail);
  const double s = field.scale();
  if (tail > 1e-8 * s * s + 1e-300) {
    logger().warn("{}: estimated tail energy {:.3e} at truncation {}", to_string(ErrorCode::TruncationTooSmall), tail,
                  truncation);
  }
  return field;
}

FourierField solve_dirichlet(const BoundaryFunction& boundary, int truncation, const QuadratureRule& rule) {
  std::vector<double> samples(rule.size());
  for (std::size_t m = 0; m < rule.size(); ++m) samples[m] = boundary(rule.node(m));
  return solve_dirichlet_samples(samples, truncation, rule);
}

FourierField solve_dirichlet(const AlternatingDatum& datum, int truncation, const QuadratureRule& rule) {
  std::vector<double> samples(rule.size());
  for (std::size_t m = 0; m < rule.size(); ++m) samples[m] = datum.eval(rule.node(m));
  return solve_dirichlet_samples(samples, truncation, rule);
}

BoundaryFunction pullback(const BoundaryFunction& boundary, const DiskPoint& p) {
  return [boundary, p](double theta) {
    const Complex x = moebius(p, std::polar(1.0, theta));
    return boundary(std::arg(x));
  };
}

FourierField recenter(const FourierField& field, const DiskPoint& p, int truncation, const QuadratureRule& rule) {
  std::vector<double> samples(rule.size());
  for (std::size_t m = 0; m < rule.size(); ++m) {
    const Complex zeta(rule.cos_index(static_cast<long long>(m)), rule.sin_index(static_cast<long long>(m)));
    samples[m] = field.eval(moebius(p, zeta));
  }
  return solve_dirichlet_samples(samples, truncation, rule);
}

FourierField recenter(const BoundaryFunction& boundary, const DiskPoint& p, int truncation, const QuadratureRule& rule) {
  return solve_dirichlet(pullback(boundary, p), truncation, rule);
}

double poisson_eval(const BoundaryFunction& boundary, const DiskPoint& p, const QuadratureRule& rule) {
  const Complex z = p.z();
  double sum = 0.0;
  for (std::size_t m = 0; m < rule.size(); ++m) {
    const Complex eta(rule.cos_index(static_cast<long long>(m)), rule.sin_index(static_cast<long long>(m)));
    sum += boundary(rule.node(m)) / std::norm(z - eta);
  }
  return (1.0 - std::norm(z)) / kTwoPi * sum * rule.weight();
}

int leading_order(const FourierField& field, double tol_order, double scale) {
  for (int j = 1; j <= field.truncation(); ++j) {
    const auto i = static_cast<std::size_t>(j);
    if (std::hypot(field.A()[i], field.B()[i]) > tol_order * scale) return j;
  }
  return field.truncation() + 1;
}

namespace {

struct NewtonOutcome {
  Complex z;
  bool ok = false;
};

NewtonOutcome newton_on_gradient(const FourierField& field, Complex z, double limit, double scale,
                                 const CriticalSearchOptions& opt) {
  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    const auto j = field.jet(z);
    if (j.df == Complex(0.0)) return {z, true};
    Complex next;
    // Newton on f'/f'' keeps quadratic convergence at degenerate critical
    // points, where f' has a multiple zero and plain Newton crawls.
    const Complex den = j.d2f * j.d2f - j.df * j.d3f;
    // det H = -|f''|^2 for a harmonic psi.
    if (std::norm(j.d2f) >= opt.singular_det * scale * scale || std::abs(den) > 0.0) {
      next = std::abs(den) > 0.0 ? z - j.df * j.d2f / den : z - j.df / j.d2f;
    } else {
      // Armijo descent on |f'|^2, whose gradient is 2 conj(f'') f'.
      const Complex dir = -2.0 * std::conj(j.d2f) * j.df;
      if (std::abs(dir) == 0.0) return {z, false};
      const double g0 = std::norm(j.df);
      double t = 1.0;
      next = z;
      for (int ls = 0; ls < 60; ++ls) {
        const Complex trial = z + t * dir;
        if (std::abs(trial) < limit && std::norm(field.jet(trial).df) <= g0 - 1e-4 * t * std::norm(dir)) {
          next = trial;
          break;
        }
        t *= 0.5;
      }
      if (next == z) return {z, false};
    }
    if (!(std::abs(next) < limit) || !std::isfinite(next.real()) || !std::isfinite(next.imag())) return {z, false};
    const double step = std::abs(next - z);
    z = next;
    if (step <= 1e-15 * (1.0 + std::abs(z))) return {z, true};
  }
  return {z, true};
}

// Taylor coefficients f^(k)(z) / k!, k = 0..K, by repeated synthetic division.
std::vector<Complex> taylor_at(const FourierField& field, Complex z, int K) {
  const auto n = field.A().size();
  std::vector<Complex> c(n);
  c[0] = Complex(0.5 * field.A()[0], 0.0);
  for (std::size_t j = 1; j < n; ++j) c[j] = Complex(field.A()[j], -field.B()[j]);
  std::vector<Complex> out;
  for (int k = 0; k <= K && !c.empty(); ++k) {
    Complex acc(0.0);
    for (std::size_t j = c.size(); j-- > 0;) {
      acc = acc * z + c[j];
      c[j] = acc;
    }
    out.push_back(c[0]);
    c.erase(c.begin());
  }
  return out;
}

// Near a critical point of order n, f' has n - 1 zeros that floating point
// noise splits apart; their mean is the simple zero of f^(n-1).
Complex polish_degenerate(const FourierField& field, Complex z, int s, double scale, double loose) {
  const int K = 2 * s + 1;
  for (int it = 0; it < 20; ++it) {
    const auto d = taylor_at(field, z, K);
    int n = 0;
    for (int k = 2; k < static_cast<int>(d.size()); ++k) {
      if (std::abs(d[static_cast<std::size_t>(k)]) > loose * scale) {
        n = k;
        break;
      }
    }
    if (n <= 2) return z;
    const auto un = static_cast<std::size_t>(n);
    const Complex step = d[un - 1] / (static_cast<double>(n) * d[un]);
    z -= step;
    if (std::abs(step) <= 1e-16) break;
  }
  return z;
}

}  // namespace

CriticalSearchResult find_zero_critical_points(const FourierField& field, int s, const CriticalSearchOptions& opt) {
  const double scale = std::max(field.scale(), 1e-300);
  const double limit = 1.0 - opt.boundary_margin;
  const int nr = std::max(1, opt.seeds_r);
  const int nt = std::max(1, opt.seeds_theta);
  const std::size_t n_seeds = static_cast<std::size_t>(nr) * static_cast<std::size_t>(nt);

  std::vector<NewtonOutcome> outcomes(n_seeds);
  parallel_for(n_seeds, opt.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int ir = static_cast<int>(idx / static_cast<std::size_t>(nt));
      const int it = static_cast<int>(idx % static_cast<std::size_t>(nt));
      const double r = limit * (static_cast<double>(ir) + 0.5) / static_cast<double>(nr);
      const double t = kTwoPi * (static_cast<double>(it) + 0.5 * (ir % 2)) / static_cast<double>(nt);
      outcomes[idx] = newton_on_gradient(field, std::polar(r, t), limit, scale, opt);
    }
  });

  CriticalSearchResult result;
  result.seeds = static_cast<int>(n_seeds);
  std::vector<Complex> hits;
  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++result.diverged_seeds;
      continue;
    }
    const auto j = field.jet(o.z);
    if (std::abs(j.f.real()) < opt.tol_value * scale && std::abs(j.df) < opt.tol_grad * scale) hits.push_back(o.z);
  }
  if (result.diverged_seeds > 0) {
    logger().debug("{}: {} of {} seeds skipped", to_string(ErrorCode::NewtonDivergence), result.diverged_seeds,
                   result.seeds);
  }

  std::sort(hits.begin(), hits.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  std::vector<std::vector<Complex>> clusters;
  for (Complex h : hits) {
    bool placed = false;
    for (auto& c : clusters) {
      if (std::abs(c.front() - h) < opt.dedup_radius) {
        c.push_back(h);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({h});
  }

  const QuadratureRule rule(static_cast<std::size_t>(opt.quadrature_nodes));
  for (const auto& c : clusters) {
    Complex centroid(0.0);
    for (Complex h : c) centroid += h;
    centroid /= static_cast<double>(c.size());
    const Complex polished = polish_degenerate(field, centroid, s, scale, std::sqrt(opt.tol_order));
    if (std::abs(polished - centroid) < opt.dedup_radius && std::abs(polished) < limit) {
      const auto jp = field.jet(polished);
      if (std::abs(jp.f.real()) < opt.tol_value * scale && std::abs(jp.df) < opt.tol_grad * scale) centroid = polished;
    }
    const DiskPoint p(centroid);
    const auto j = field.jet(centroid);
    CriticalPoint cp;
    cp.location = p;
    cp.residual_value = std::abs(j.f.real());
    cp.residual_gradient = std::abs(j.df);
    cp.order = leading_order(recenter(field, p, field.truncation(), rule), opt.tol_order, scale);
    result.points.push_back(cp);
  }

  if (static_cast<int>(result.points.size()) > std::max(0, s - 1)) {
    throw Error(ErrorCode::TooManyCriticalPoints,
                "found " + std::to_string(result.points.size()) + " zero-level critical points but at most " +
                    std::to_string(s - 1) + " exist for k = " + std::to_string(2 * s) +
                    " (numerical failure or non-admissible datum)");
  }
  return result;
}

}  // namespace segrega
