#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "segrega/boundary_datum.hpp"
#include "segrega/error.hpp"

namespace segrega {

/// Cell-centred polar grid on the unit disk: r_m = (m + 1/2) dr, theta_l = l dtheta.
class PolarGrid {
 public:
  PolarGrid() = default;
  /// Throws InvalidGrid unless n_r >= 2 and n_theta is even and >= 64.
  PolarGrid(int n_r, int n_theta);

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  std::size_t cells() const { return static_cast<std::size_t>(n_r_) * static_cast<std::size_t>(n_theta_); }
  double dr() const { return dr_; }
  double dtheta() const { return dtheta_; }
  double r(int m) const { return (m + 0.5) * dr_; }
  double theta(int l) const { return l * dtheta_; }
  std::size_t index(int m, int l) const {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(n_theta_) + static_cast<std::size_t>(l);
  }
  int wrap(int l) const { return ((l % n_theta_) + n_theta_) % n_theta_; }
  double x1(int m, int l) const;
  double x2(int m, int l) const;
  double area(int m) const { return r(m) * dr_ * dtheta_; }
  /// Larger of the two cell side lengths at ring m.
  double cell_size(int m) const;

  // Finite-volume face weights (face length over centre distance).
  double w_out(int m) const;  ///< towards m+1, or to the boundary r = 1 on the last ring
  double w_in(int m) const;   ///< towards m-1; zero on ring 0 where the face collapses to the origin
  double w_ang(int m) const;  ///< towards l +- 1
  double diag(int m) const { return w_out(m) + w_in(m) + 2.0 * w_ang(m); }

 private:
  int n_r_ = 0;
  int n_theta_ = 0;
  double dr_ = 0.0;
  double dtheta_ = 0.0;
};

/// k species densities on a PolarGrid, interleaved per cell, plus the
/// Dirichlet samples phi_i(theta_l) on the boundary circle.
struct DensityGrid {
  PolarGrid grid;
  int k = 0;
  double mu = 0.0;
  std::vector<double> values;    ///< values[index * k + i]
  std::vector<double> boundary;  ///< boundary[l * k + i]

  static DensityGrid zeros(const PolarGrid& grid, int k);
  /// Empty interior, boundary sampled from the datum.
  static DensityGrid from_datum(const AdmissibleDatum& datum, const PolarGrid& grid);

  double& at(std::size_t cell, int i) { return values[cell * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)]; }
  double at(std::size_t cell, int i) const {
    return values[cell * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
  }
  double bnd(int l, int i) const {
    return boundary[static_cast<std::size_t>(l) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
  }
  /// One species as a flat cell array.
  std::vector<double> field(int i) const;
  /// Per-cell sum over species.
  std::vector<double> total() const;
  /// (u_i - sum_{j != i} u_j)^+ per species: equal to u_i once the supports
  /// are disjoint, and free of the overlap layer to first order before that.
  DensityGrid projected() const;
  double max_boundary() const;
};

/// Discrete Laplacian (flux sum over cell area) of a scalar cell field with
/// boundary samples on the circle.
std::vector<double> discrete_laplacian(const PolarGrid& grid, const std::vector<double>& field,
                                       const std::vector<double>& boundary);
/// Same, multiplied by area / diag per cell: a residual in units of the field.
std::vector<double> scaled_laplacian(const PolarGrid& grid, const std::vector<double>& field,
                                     const std::vector<double>& boundary);

/// f(r, theta) at every cell centre.
template <typename F>
std::vector<double> sample_cells(const PolarGrid& grid, F&& f) {
  std::vector<double> out(grid.cells());
  for (int m = 0; m < grid.n_r(); ++m) {
    for (int l = 0; l < grid.n_theta(); ++l) out[grid.index(m, l)] = f(grid.r(m), grid.theta(l));
  }
  return out;
}

struct SolverOptions {
  /// Convergence when both the scaled residual and the estimated error fall
  /// below tol_rel * max boundary amplitude.
  double tol_rel = 1e-8;
  int max_sweeps = 100000;
  /// Over-relaxation factor; 0 picks one from the grid size.
  double omega = 0.0;
  int check_every = 10;
  /// Cold starts above this mu are refused.
  double cold_start_limit = 1e2;
  unsigned threads = 1;
};

struct SolveStats {
  double mu = 0.0;
  int iterations = 0;
  /// max |scaled residual| of the full nonlinear system.
  double residual = 0.0;
  /// max |residual| in raw units (flux balance per area).
  double residual_raw = 0.0;
  double error_estimate = 0.0;
  double omega = 0.0;
  double overlap = 0.0;
  double energy = 0.0;
  double interface_width = 0.0;
  long long clamps = 0;
  bool converged = false;
};

struct SolveResult {
  DensityGrid state;
  SolveStats stats;
};

/// Solves -Lap u_i = -mu u_i sum_{j != i} u_j with Dirichlet data from the datum.
/// Never throws on non-convergence: the best iterate comes back with converged = false.
SolveResult solve(const AdmissibleDatum& datum, double mu, const PolarGrid& grid,
                  const DensityGrid* init = nullptr, const SolverOptions& options = {});

struct ContinuationStep {
  double mu = 0.0;
  DensityGrid state;
  SolveStats stats;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(double mu, std::vector<ContinuationStep> done, const std::string& what);
  double mu() const { return mu_; }
  const std::vector<ContinuationStep>& completed() const { return done_; }

 private:
  double mu_;
  std::vector<ContinuationStep> done_;
};

/// Increasing mu schedule, each solve warm-started from the previous one.
std::vector<ContinuationStep> continuation(const AdmissibleDatum& datum, const std::vector<double>& schedule,
                                           const PolarGrid& grid, const SolverOptions& options = {});

/// max_{i != j} sum_cells area * u_i * u_j.
double overlap(const DensityGrid& state);
/// sum_i of the discrete Dirichlet energy including boundary faces.
double dirichlet_energy(const DensityGrid& state);
/// Median arc length of the overlap band (runner-up species above 1e-3 of
/// the amplitude) across dominant-species changes on rings with 0.3 < r < 0.9.
double interface_width(const DensityGrid& state);

struct MembershipReport {
  /// max over i of the positive part of -Lap u_i (scaled).
  double subharmonic_violation = 0.0;
  /// max over i of the positive part of Lap(u_i - sum_{j != i} u_j) (scaled).
  double superharmonic_violation = 0.0;
  double min_value = 0.0;
  std::size_t negative_cells = 0;
  double overlap = 0.0;
  double tolerance = 0.0;
  bool subharmonic_ok = false;
  bool superharmonic_ok = false;
  bool nonnegative_ok = false;
};

/// Scaled discrete-Laplacian residual of amplitude * r^3 cos(3 theta) on the
/// grid: the reference for "harmonic up to discretization".
double harmonic_reference_residual(const PolarGrid& grid, double amplitude);

MembershipReport membership_checks(const DensityGrid& state, double tolerance_factor = 10.0);

}  // namespace segrega
