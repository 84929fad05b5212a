#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segrega/boundary_datum.hpp"
#include "segrega/harmonic_field.hpp"
#include "segrega/kernels.hpp"
#include "segrega/pde_solver.hpp"

namespace segrega {

inline constexpr int kUnassigned = -1;

struct PartitionOptions {
  /// Cells whose largest density is at most threshold_rel * amplitude stay unassigned.
  double threshold_rel = 1e-3;
  /// A cell is a junction candidate when >= 3 labels lie within this many local cell sizes.
  double candidate_radius = 2.0;
  /// Candidates closer than this many cell sizes merge into one multiple point.
  double cluster_radius = 3.0;
  /// Outer radius r for the r, r/2, r/4 multiplicity count, in cell sizes.
  double multiplicity_radius = 8.0;
  /// Interface edges closer than this many cell sizes to a multiple point are dropped.
  double exclusion_radius = 4.0;
  /// An interface ends at a boundary zero when it passes within this many cell sizes.
  double zero_radius = 4.0;
};

struct MultiplePoint {
  Complex location;
  int multiplicity = 0;
  bool on_boundary = false;
  /// Index into NodalPartition::zeros for boundary points.
  int zero_index = -1;
  std::optional<double> phase;
  std::optional<double> fit_exponent;
};

struct Interface {
  int region_a = 0;
  int region_b = 0;
  /// Decimated midpoints of the label-change edges, as (x1, x2).
  std::vector<Complex> polyline;
  /// Cell pairs (inside a, inside b) along the interface.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// Graph vertices at the two ends: interior multiple points first, then boundary zeros.
  std::vector<int> ends;
};

enum class PartitionSource { Densities, SignedField };

struct NodalPartition {
  PolarGrid grid;
  int k = 0;
  PartitionSource source = PartitionSource::Densities;
  double threshold = 0.0;
  double amplitude = 0.0;
  /// Region id per cell, or kUnassigned inside the interface corridor.
  std::vector<int> labels;
  /// Same with every corridor cell given to its nearest region.
  std::vector<int> filled;
  int regions = 0;
  /// Cell count of each region in `labels`.
  std::vector<std::size_t> region_cells;
  /// Sign of each region for signed sources (+1 / -1); empty otherwise.
  std::vector<int> region_sign;
  /// Angles where the boundary trace changes region.
  std::vector<double> zeros;
  /// Interior multiple points (m >= 3).
  std::vector<MultiplePoint> multiple_points;
  /// Boundary zeros with their multiplicity = adjacent interfaces + 1.
  std::vector<MultiplePoint> boundary_points;
  std::vector<Interface> interfaces;
  /// Scalar field U on the cells (sum of densities, or |psi|).
  std::vector<double> U;
  /// Boundary samples of U.
  std::vector<double> U_boundary;
};

/// Partition of a density state: argmax labels above the threshold, regions
/// by 4-neighbour connectivity (seam wrapped), junctions and interfaces on the
/// corridor-filled map. The datum supplies the boundary zeros.
NodalPartition extract_partition(const DensityGrid& state, const AdmissibleDatum& datum,
                                 const PartitionOptions& options = {});
/// Same with explicit zero angles.
NodalPartition extract_partition(const DensityGrid& state, const std::vector<double>& zeros,
                                 const PartitionOptions& options = {});

/// Rebuilds a density partition from stored labels (kUnassigned in the
/// corridor) and U. Throws MissingRegion / DisconnectedRegion like extraction.
NodalPartition partition_from_labels(const PolarGrid& grid, int k, std::vector<int> labels,
                                     const std::vector<double>& zeros, std::vector<double> U,
                                     std::vector<double> U_boundary, double amplitude,
                                     const PartitionOptions& options = {});

/// Partition of |psi| for a signed field psi sampled on the grid: regions are
/// the sign components, so a region may touch several boundary arcs.
NodalPartition extract_signed_partition(const PolarGrid& grid, const std::vector<double>& psi,
                                        const std::vector<double>& psi_boundary, const std::vector<double>& zeros,
                                        const PartitionOptions& options = {});
NodalPartition extract_signed_partition(const FourierField& field, const PolarGrid& grid,
                                        const std::vector<double>& zeros, const PartitionOptions& options = {});

/// Number of regions meeting B_r(p), required stable over r, r/2, r/4.
int multiplicity(const NodalPartition& partition, Complex p, double radius);

struct PartitionGraph {
  int n = 0;
  int m_edges = 0;
  int f = 0;
  int interior_vertices = 0;
  int boundary_vertices = 0;
  int interface_edges = 0;
  /// Adjacency over vertices (interior first, then zeros); boundary arcs included.
  std::vector<std::vector<int>> adjacency;
  int euler() const { return n - m_edges + f; }
  bool euler_ok = false;
  /// Interfaces plus zeros form a tree whose leaves are exactly the zeros.
  bool tree = false;
  int leaves = 0;
  /// Interfaces not ending at exactly two vertices.
  int dangling = 0;
};

/// Graph of interfaces, boundary arcs and regions. Throws EulerViolation when
/// n - m + f != 2.
PartitionGraph build_graph(const NodalPartition& partition);

struct IdentityReport {
  /// sum over interior and boundary multiple points of m(p) - 2.
  int sum_index = 0;
  /// k - 2 for densities, 2 rho - 2 - 2s for signed fields.
  int expected = 0;
  bool holds = false;
  int z3_count = 0;
  int z3_interior = 0;
  bool z3_nonempty = false;
  bool z3_bound = false;
  /// Tree arc count k + #(Z_3 in D) - 1 against the interface count.
  int expected_arcs = 0;
  int arcs = 0;
  bool arcs_ok = false;
  /// Signed sources: all interior points even, at most s - 1 of them, and all
  /// 4-points when exactly s - 1.
  bool even_ok = true;
  bool count_ok = true;
  bool four_points_ok = true;
  std::vector<int> multiset;
};

/// Throws IdentityViolation (message carries the graph) when the identity fails.
IdentityReport verify_multiplicity_identity(const NodalPartition& partition);

enum class K6Class { Six, FourFour, ThreeFive, FourThreeThree, QuadTriple };
std::string_view to_string(K6Class c);

/// Classifies a multiplicity multiset; throws UnclassifiableMultiset.
K6Class classify_k6(std::vector<int> multiset);
/// Uses interior points plus boundary points with m >= 3; throws SpeciesCountNot6.
K6Class classify_k6(const NodalPartition& partition);

/// Bilinear sampling of a cell field in (r, theta), with the across-centre
/// segment for r < r_0 and the boundary samples beyond the last ring.
class GridSampler {
 public:
  GridSampler(const PolarGrid& grid, std::vector<double> field, std::vector<double> boundary);
  double operator()(Complex x) const;
  /// Central differences with step h.
  Vec2 gradient(Complex x, double h) const;

 private:
  double ring_value(int m, double t) const;
  double boundary_value(double t) const;
  PolarGrid grid_;
  std::vector<double> field_;
  std::vector<double> boundary_;
};

struct ExponentFit {
  double exponent = 0.0;
  double phase = 0.0;
  double residual = 0.0;
  int order = 0;
  std::vector<double> radii;
  std::vector<double> means;
  bool exponent_ok = false;
};

struct FitOptions {
  /// Outer circle radius; the fit also uses r/2 and r/4.
  double radius = 0.8;
  int samples = 512;
  double max_residual = 0.25;
  double exponent_tol = 0.1;
};

/// 0.9 times the distance from p to the circle or to the nearest other
/// interior multiple point, whichever is smaller.
double default_fit_radius(const NodalPartition& partition, Complex p);

/// Log-log slope of circle averages of U around p and the phase of
/// |cos((h/2)(theta + theta_0))|, h the multiplicity. Throws FitFailure.
ExponentFit local_exponent_fit(const std::function<double(Complex)>& U, Complex p, int multiplicity,
                               const FitOptions& options = {});

struct ReflectionSample {
  Complex point;
  int region_a = 0;
  int region_b = 0;
  double angle = 0.0;
  double mismatch = 0.0;
  double grad_norm = 0.0;
};

struct ReflectionReport {
  std::vector<ReflectionSample> samples;
  /// |pi - angle| between the one-sided gradients.
  double max_angle_error = 0.0;
  double median_angle_error = 0.0;
  double median_mismatch = 0.0;
  double max_mismatch = 0.0;
  double min_grad_norm = 0.0;
  /// |grad U| on circles of radius r and r/4 around each interior multiple point.
  std::vector<std::pair<double, double>> decay_near_points;
};

/// One-sided gradients of the projected densities at interface points,
/// extrapolated from `offset` and 2 `offset` cell sizes inside each region.
ReflectionReport gradient_reflection_check(const DensityGrid& state, const NodalPartition& partition,
                                           double offset = 3.0, int per_interface = 16);

struct ReconstructionReport {
  std::vector<double> psi;
  std::vector<double> psi_boundary;
  /// max |scaled Laplacian| of psi over all cells.
  double residual = 0.0;
  /// Same for the raw (per-area) Laplacian.
  double residual_raw = 0.0;
  double reference = 0.0;
  double reference_raw = 0.0;
  double tolerance = 0.0;
  /// Largest scaled residual within 3 multiplicity radii of an interior multiple point.
  double residual_near_points = 0.0;
  bool harmonic = false;
};

/// psi = sum_j (-1)^j u_j with its discrete-Laplacian residual against the
/// residual of r^3 cos(3 theta) of the same amplitude. Throws
/// OddMultiplicityPresent if any interior multiple point has odd multiplicity.
ReconstructionReport reconstruct_alternating(const DensityGrid& state, const NodalPartition& partition,
                                             double tolerance_factor = 10.0);

}  // namespace segrega
