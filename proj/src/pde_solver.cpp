#include "segrega/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "segrega/log.hpp"
#include "segrega/parallel.hpp"

namespace segrega {

PolarGrid::PolarGrid(int n_r, int n_theta) : n_r_(n_r), n_theta_(n_theta) {
  if (n_r < 2) throw Error(ErrorCode::InvalidGrid, "n_r must be at least 2, got " + std::to_string(n_r));
  if (n_theta < 64 || n_theta % 2 != 0) {
    throw Error(ErrorCode::InvalidGrid, "n_theta must be even and at least 64, got " + std::to_string(n_theta));
  }
  dr_ = 1.0 / n_r;
  dtheta_ = kTwoPi / n_theta;
}

double PolarGrid::x1(int m, int l) const { return r(m) * std::cos(theta(l)); }
double PolarGrid::x2(int m, int l) const { return r(m) * std::sin(theta(l)); }
double PolarGrid::cell_size(int m) const { return std::max(dr_, r(m) * dtheta_); }

double PolarGrid::w_out(int m) const {
  if (m == n_r_ - 1) return dtheta_ / (0.5 * dr_);
  return (m + 1) * dr_ * dtheta_ / dr_;
}

double PolarGrid::w_in(int m) const { return m == 0 ? 0.0 : m * dr_ * dtheta_ / dr_; }

double PolarGrid::w_ang(int m) const { return dr_ / (r(m) * dtheta_); }

DensityGrid DensityGrid::zeros(const PolarGrid& grid, int k) {
  DensityGrid g;
  g.grid = grid;
  g.k = k;
  g.values.assign(grid.cells() * static_cast<std::size_t>(k), 0.0);
  g.boundary.assign(static_cast<std::size_t>(grid.n_theta()) * static_cast<std::size_t>(k), 0.0);
  return g;
}

DensityGrid DensityGrid::from_datum(const AdmissibleDatum& datum, const PolarGrid& grid) {
  DensityGrid g = zeros(grid, datum.k());
  for (int l = 0; l < grid.n_theta(); ++l) {
    const double t = grid.theta(l);
    const int i = datum.species_at(t);
    g.boundary[static_cast<std::size_t>(l) * static_cast<std::size_t>(g.k) + static_cast<std::size_t>(i)] =
        datum.species(i, t);
  }
  return g;
}

std::vector<double> DensityGrid::field(int i) const {
  std::vector<double> out(grid.cells());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = at(c, i);
  return out;
}

std::vector<double> DensityGrid::total() const {
  std::vector<double> out(grid.cells(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (int i = 0; i < k; ++i) out[c] += at(c, i);
  }
  return out;
}

DensityGrid DensityGrid::projected() const {
  DensityGrid out = *this;
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += at(c, i);
    for (int i = 0; i < k; ++i) out.at(c, i) = std::max(0.0, 2.0 * at(c, i) - sum);
  }
  return out;
}

double DensityGrid::max_boundary() const {
  double m = 0.0;
  for (double v : boundary) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Flux sum  sum_faces w (u_nb - u)  for a scalar field.
double flux(const PolarGrid& g, const std::vector<double>& u, const std::vector<double>& bnd, int m, int l) {
  const std::size_t c = g.index(m, l);
  const double uc = u[c];
  const double out = (m == g.n_r() - 1) ? bnd[static_cast<std::size_t>(l)] : u[g.index(m + 1, l)];
  double f = g.w_out(m) * (out - uc) + g.w_ang(m) * (u[g.index(m, g.wrap(l + 1))] - uc) +
             g.w_ang(m) * (u[g.index(m, g.wrap(l - 1))] - uc);
  if (m > 0) f += g.w_in(m) * (u[g.index(m - 1, l)] - uc);
  return f;
}

double default_omega(const PolarGrid& g) {
  // Point-Jacobi spectral radius from the first Dirichlet eigenvalue of the
  // disk against the diagonal at mid radius.
  const double lambda1 = 5.783185962946784;
  const double d_over_a = 2.0 / (g.dr() * g.dr()) + 2.0 / (0.25 * g.dtheta() * g.dtheta());
  const double rho = 1.0 - lambda1 / d_over_a;
  return 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho * rho)));
}

struct SweepTotals {
  double max_update = 0.0;
  long long clamps = 0;
};

// One nonlinear SOR sweep in red-black order. Each cell updates its species
// in turn from u_i (D + c sum_{j != i} u_j) = S_i.
SweepTotals sweep(DensityGrid& s, double mu, double omega, unsigned threads) {
  const PolarGrid& g = s.grid;
  const int k = s.k;
  const int nr = g.n_r();
  const int nt = g.n_theta();
  std::vector<double> ring_update(static_cast<std::size_t>(nr), 0.0);
  std::vector<long long> ring_clamps(static_cast<std::size_t>(nr), 0);

  for (int color = 0; color < 2; ++color) {
    parallel_for(static_cast<std::size_t>(nr), threads, [&](std::size_t mb, std::size_t me) {
      std::vector<double> S(static_cast<std::size_t>(k));
      for (std::size_t mm = mb; mm < me; ++mm) {
        const int m = static_cast<int>(mm);
        const double wo = g.w_out(m);
        const double wi = g.w_in(m);
        const double wa = g.w_ang(m);
        const double D = g.diag(m);
        const double c = g.area(m) * mu;
        const bool last = m == nr - 1;
        double upd = ring_update[mm];
        long long clamps = ring_clamps[mm];
        for (int l = (m + color) % 2; l < nt; l += 2) {
          const std::size_t base = g.index(m, l) * static_cast<std::size_t>(k);
          const std::size_t east = last ? 0 : g.index(m + 1, l) * static_cast<std::size_t>(k);
          const std::size_t west = m > 0 ? g.index(m - 1, l) * static_cast<std::size_t>(k) : 0;
          const std::size_t north = g.index(m, g.wrap(l + 1)) * static_cast<std::size_t>(k);
          const std::size_t south = g.index(m, g.wrap(l - 1)) * static_cast<std::size_t>(k);
          double T = 0.0;
          for (int i = 0; i < k; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double ue = last ? s.boundary[static_cast<std::size_t>(l) * static_cast<std::size_t>(k) + ii]
                                   : s.values[east + ii];
            double si = wo * ue + wa * (s.values[north + ii] + s.values[south + ii]);
            if (m > 0) si += wi * s.values[west + ii];
            S[ii] = si;
            T += s.values[base + ii];
          }
          for (int i = 0; i < k; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            double& ui = s.values[base + ii];
            const double old = ui;
            const double target = S[ii] / (D + c * (T - old));
            double next = old + omega * (target - old);
            if (next < 0.0) {
              next = 0.0;
              ++clamps;
            }
            upd = std::max(upd, std::abs(next - old));
            T += next - old;
            ui = next;
          }
        }
        ring_update[mm] = upd;
        ring_clamps[mm] = clamps;
      }
    });
  }
  SweepTotals t;
  for (int m = 0; m < nr; ++m) {
    t.max_update = std::max(t.max_update, ring_update[static_cast<std::size_t>(m)]);
    t.clamps += ring_clamps[static_cast<std::size_t>(m)];
  }
  return t;
}

struct Residuals {
  double scaled = 0.0;
  double raw = 0.0;
};

Residuals residuals(const DensityGrid& s, double mu) {
  const PolarGrid& g = s.grid;
  const int k = s.k;
  Residuals r;
  std::vector<double> S(static_cast<std::size_t>(k));
  for (int m = 0; m < g.n_r(); ++m) {
    const double D = g.diag(m);
    const double A = g.area(m);
    const double c = A * mu;
    const bool last = m == g.n_r() - 1;
    for (int l = 0; l < g.n_theta(); ++l) {
      const std::size_t cell = g.index(m, l);
      double T = 0.0;
      for (int i = 0; i < k; ++i) T += s.at(cell, i);
      for (int i = 0; i < k; ++i) {
        const double ue = last ? s.bnd(l, i) : s.at(g.index(m + 1, l), i);
        double si = g.w_out(m) * ue + g.w_ang(m) * (s.at(g.index(m, g.wrap(l + 1)), i) +
                                                    s.at(g.index(m, g.wrap(l - 1)), i));
        if (m > 0) si += g.w_in(m) * s.at(g.index(m - 1, l), i);
        const double ui = s.at(cell, i);
        const double others = T - ui;
        const double res = ui * (D + c * others) - si;
        r.scaled = std::max(r.scaled, std::abs(res) / (D + c * others));
        r.raw = std::max(r.raw, std::abs(res) / A);
      }
    }
  }
  return r;
}

}  // namespace

std::vector<double> discrete_laplacian(const PolarGrid& grid, const std::vector<double>& field,
                                       const std::vector<double>& boundary) {
  std::vector<double> out(grid.cells());
  for (int m = 0; m < grid.n_r(); ++m) {
    for (int l = 0; l < grid.n_theta(); ++l) out[grid.index(m, l)] = flux(grid, field, boundary, m, l) / grid.area(m);
  }
  return out;
}

std::vector<double> scaled_laplacian(const PolarGrid& grid, const std::vector<double>& field,
                                     const std::vector<double>& boundary) {
  std::vector<double> out(grid.cells());
  for (int m = 0; m < grid.n_r(); ++m) {
    for (int l = 0; l < grid.n_theta(); ++l) out[grid.index(m, l)] = flux(grid, field, boundary, m, l) / grid.diag(m);
  }
  return out;
}

SolveResult solve(const AdmissibleDatum& datum, double mu, const PolarGrid& grid, const DensityGrid* init,
                  const SolverOptions& options) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::InvalidSchedule, "mu must be finite and nonnegative");
  }
  SolveResult out;
  out.state = DensityGrid::from_datum(datum, grid);
  if (init != nullptr) {
    if (init->k != datum.k() || init->grid.n_r() != grid.n_r() || init->grid.n_theta() != grid.n_theta()) {
      throw Error(ErrorCode::InvalidGrid, "initial state does not match the grid or species count");
    }
    out.state.values = init->values;
  }
  out.state.mu = mu;
  DensityGrid& s = out.state;
  SolveStats& st = out.stats;
  st.mu = mu;

  const double amp = std::max(s.max_boundary(), 1e-300);
  const double tol = options.tol_rel * amp;
  double omega = options.omega > 0.0 ? options.omega : default_omega(grid);
  st.omega = omega;
  const int every = std::max(1, options.check_every);
  const int window = 5;

  std::deque<double> history;  // max update at each check
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> best_values = s.values;
  int growth = 0;
  // Stall guard: the best residual must halve at least every `stall_checks` checks.
  const int stall_checks = 200;
  double mark_residual = std::numeric_limits<double>::infinity();
  int checks_since_mark = 0;

  for (int it = 1; it <= options.max_sweeps; ++it) {
    const SweepTotals t = sweep(s, mu, omega, options.threads);
    st.clamps += t.clamps;
    st.iterations = it;
    if (!std::isfinite(t.max_update)) {
      throw Error(ErrorCode::NegativityViolation, "non-finite update at sweep " + std::to_string(it));
    }
    if (it % every != 0 && it != options.max_sweeps) continue;

    const Residuals r = residuals(s, mu);
    st.residual = r.scaled;
    st.residual_raw = r.raw;
    history.push_back(t.max_update);
    if (history.size() > window + 1) history.pop_front();

    double estimate = std::numeric_limits<double>::infinity();
    if (t.max_update == 0.0) {
      estimate = 0.0;
    } else if (history.size() > 1 && history.front() > 0.0) {
      const double span = static_cast<double>(every) * static_cast<double>(history.size() - 1);
      const double rho = std::pow(t.max_update / history.front(), 1.0 / span);
      if (rho < 1.0) estimate = t.max_update * rho / (1.0 - rho);
    }
    st.error_estimate = estimate;

    bool lower = false;
    if (r.scaled < best_residual) {
      best_residual = r.scaled;
      best_values = s.values;
      growth = 0;
    } else if (r.scaled > 10.0 * best_residual && ++growth >= 3) {
      lower = true;
    }
    if (r.scaled < 0.5 * mark_residual) {
      mark_residual = r.scaled;
      checks_since_mark = 0;
    } else if (++checks_since_mark >= stall_checks) {
      lower = true;
    }
    if (lower && omega > 1.0) {
      omega = 1.0 + 0.5 * (omega - 1.0);
      st.omega = omega;
      growth = 0;
      checks_since_mark = 0;
      mark_residual = r.scaled;
      history.clear();
      logger().info("mu = {}: residual stalled, over-relaxation lowered to {:.4f}", mu, omega);
    }

    if (r.scaled <= tol && estimate <= tol) {
      st.converged = true;
      break;
    }
  }

  if (!st.converged) {
    s.values = best_values;
    const Residuals r = residuals(s, mu);
    st.residual = r.scaled;
    st.residual_raw = r.raw;
    logger().warn("{}: mu = {} stopped after {} sweeps, residual {:.3e} (tolerance {:.3e})",
                  to_string(ErrorCode::NonConvergence), mu, st.iterations, st.residual, tol);
  }
  for (double v : s.values) {
    if (v < 0.0) throw Error(ErrorCode::NegativityViolation, "negative density after projection");
  }
  st.overlap = overlap(s);
  st.energy = dirichlet_energy(s);
  st.interface_width = interface_width(s);
  logger().debug("mu = {}: {} sweeps, residual {:.3e}, overlap {:.3e}, clamps {}", mu, st.iterations, st.residual,
                 st.overlap, st.clamps);
  return out;
}

NonConvergenceError::NonConvergenceError(double mu, std::vector<ContinuationStep> done, const std::string& what)
    : Error(ErrorCode::NonConvergence, what), mu_(mu), done_(std::move(done)) {}

std::vector<ContinuationStep> continuation(const AdmissibleDatum& datum, const std::vector<double>& schedule,
                                           const PolarGrid& grid, const SolverOptions& options) {
  if (schedule.empty()) throw Error(ErrorCode::EmptySchedule, "mu schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] >= 0.0) || !std::isfinite(schedule[i])) {
      throw Error(ErrorCode::InvalidSchedule, "mu values must be finite and nonnegative");
    }
    if (i > 0 && !(schedule[i] > schedule[i - 1])) {
      throw Error(ErrorCode::InvalidSchedule, "mu schedule must be strictly increasing");
    }
  }
  std::vector<ContinuationStep> steps;
  if (schedule.front() > options.cold_start_limit) {
    throw NonConvergenceError(schedule.front(), steps,
                              "cold start at mu = " + fmt::format("{}", schedule.front()) +
                                  " is above the limit " + fmt::format("{}", options.cold_start_limit) +
                                  "; start the schedule at mu <= 1 and continue upwards");
  }
  for (double mu : schedule) {
    const DensityGrid* init = steps.empty() ? nullptr : &steps.back().state;
    SolveResult r = solve(datum, mu, grid, init, options);
    if (!r.stats.converged) {
      const std::string msg = fmt::format("no convergence at mu = {} after {} sweeps (residual {:.3e})", mu,
                                          r.stats.iterations, r.stats.residual);
      steps.push_back({mu, std::move(r.state), r.stats});
      throw NonConvergenceError(mu, std::move(steps), msg);
    }
    steps.push_back({mu, std::move(r.state), r.stats});
  }
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].stats.overlap > steps[i - 1].stats.overlap) {
      logger().warn("overlap increased from mu = {} to mu = {}", steps[i - 1].mu, steps[i].mu);
    }
  }
  return steps;
}

double overlap(const DensityGrid& s) {
  const PolarGrid& g = s.grid;
  double best = 0.0;
  for (int i = 0; i < s.k; ++i) {
    for (int j = i + 1; j < s.k; ++j) {
      double sum = 0.0;
      for (int m = 0; m < g.n_r(); ++m) {
        double ring = 0.0;
        for (int l = 0; l < g.n_theta(); ++l) {
          const std::size_t c = g.index(m, l);
          ring += s.at(c, i) * s.at(c, j);
        }
        sum += ring * g.area(m);
      }
      best = std::max(best, sum);
    }
  }
  return best;
}

double dirichlet_energy(const DensityGrid& s) {
  const PolarGrid& g = s.grid;
  double e = 0.0;
  for (int i = 0; i < s.k; ++i) {
    for (int m = 0; m < g.n_r(); ++m) {
      for (int l = 0; l < g.n_theta(); ++l) {
        const double u = s.at(g.index(m, l), i);
        const double out = (m == g.n_r() - 1) ? s.bnd(l, i) : s.at(g.index(m + 1, l), i);
        const double nb = s.at(g.index(m, g.wrap(l + 1)), i);
        e += g.w_out(m) * (out - u) * (out - u) + g.w_ang(m) * (nb - u) * (nb - u);
      }
    }
  }
  return e;
}

double interface_width(const DensityGrid& s) {
  const PolarGrid& g = s.grid;
  const int nt = g.n_theta();
  const double cut = 1e-3 * s.max_boundary();
  std::vector<double> widths;
  std::vector<int> dom(static_cast<std::size_t>(nt));
  std::vector<double> second(static_cast<std::size_t>(nt));
  for (int m = 0; m < g.n_r(); ++m) {
    const double r = g.r(m);
    if (r <= 0.3 || r >= 0.9) continue;
    for (int l = 0; l < nt; ++l) {
      const std::size_t c = g.index(m, l);
      int best = -1;
      double bv = -1.0, sv = 0.0;
      for (int i = 0; i < s.k; ++i) {
        const double v = s.at(c, i);
        if (v > bv) {
          sv = std::max(sv, bv);
          bv = v;
          best = i;
        } else {
          sv = std::max(sv, v);
        }
      }
      dom[static_cast<std::size_t>(l)] = best;
      second[static_cast<std::size_t>(l)] = sv;
    }
    for (int l = 0; l < nt; ++l) {
      if (dom[static_cast<std::size_t>(l)] == dom[static_cast<std::size_t>(g.wrap(l + 1))]) continue;
      int count = 0;
      for (int d = 0; d < nt / 4 && second[static_cast<std::size_t>(g.wrap(l - d))] > cut; ++d) ++count;
      for (int d = 1; d < nt / 4 && second[static_cast<std::size_t>(g.wrap(l + d))] > cut; ++d) ++count;
      widths.push_back(count * r * g.dtheta());
    }
  }
  if (widths.empty()) return 0.0;
  std::nth_element(widths.begin(), widths.begin() + static_cast<std::ptrdiff_t>(widths.size() / 2), widths.end());
  return widths[widths.size() / 2];
}

double harmonic_reference_residual(const PolarGrid& grid, double amplitude) {
  const auto field = sample_cells(grid, [&](double r, double t) { return amplitude * r * r * r * std::cos(3.0 * t); });
  std::vector<double> bnd(static_cast<std::size_t>(grid.n_theta()));
  for (int l = 0; l < grid.n_theta(); ++l) bnd[static_cast<std::size_t>(l)] = amplitude * std::cos(3.0 * grid.theta(l));
  double worst = 0.0;
  for (double v : scaled_laplacian(grid, field, bnd)) worst = std::max(worst, std::abs(v));
  return worst;
}

MembershipReport membership_checks(const DensityGrid& s, double tolerance_factor) {
  MembershipReport rep;
  const PolarGrid& g = s.grid;
  const auto nt = static_cast<std::size_t>(g.n_theta());
  rep.tolerance = tolerance_factor * harmonic_reference_residual(g, std::max(s.max_boundary(), 1e-300));

  std::vector<std::vector<double>> fields(static_cast<std::size_t>(s.k));
  std::vector<std::vector<double>> bnds(static_cast<std::size_t>(s.k), std::vector<double>(nt));
  for (int i = 0; i < s.k; ++i) {
    fields[static_cast<std::size_t>(i)] = s.field(i);
    for (std::size_t l = 0; l < nt; ++l) bnds[static_cast<std::size_t>(i)][l] = s.bnd(static_cast<int>(l), i);
  }
  const std::vector<double> total = s.total();
  std::vector<double> total_bnd(nt, 0.0);
  for (std::size_t l = 0; l < nt; ++l) {
    for (int i = 0; i < s.k; ++i) total_bnd[l] += s.bnd(static_cast<int>(l), i);
  }

  for (int i = 0; i < s.k; ++i) {
    const auto& u = fields[static_cast<std::size_t>(i)];
    for (double v : scaled_laplacian(g, u, bnds[static_cast<std::size_t>(i)])) {
      rep.subharmonic_violation = std::max(rep.subharmonic_violation, -v);
    }
    // u_i - sum_{j != i} u_j = 2 u_i - U
    std::vector<double> w(u.size());
    for (std::size_t c = 0; c < w.size(); ++c) w[c] = 2.0 * u[c] - total[c];
    std::vector<double> wb(nt);
    for (std::size_t l = 0; l < nt; ++l) wb[l] = 2.0 * bnds[static_cast<std::size_t>(i)][l] - total_bnd[l];
    for (double v : scaled_laplacian(g, w, wb)) rep.superharmonic_violation = std::max(rep.superharmonic_violation, v);
  }
  rep.min_value = std::numeric_limits<double>::infinity();
  for (double v : s.values) {
    rep.min_value = std::min(rep.min_value, v);
    if (v < 0.0) ++rep.negative_cells;
  }
  rep.overlap = overlap(s);
  rep.subharmonic_ok = rep.subharmonic_violation <= rep.tolerance;
  rep.superharmonic_ok = rep.superharmonic_violation <= rep.tolerance;
  rep.nonnegative_ok = rep.negative_cells == 0;
  return rep;
}

}  // namespace segrega
