#pragma once

#include <functional>
#include <random>
#include <vector>

#include "segrega/boundary_datum.hpp"
#include "segrega/kernels.hpp"
#include "segrega/pde_solver.hpp"

namespace segrega {

/// Splits |psi| into k species by the sign components of psi; each component
/// must touch exactly one arc of the datum, whose species it becomes.
DensityGrid densities_from_signed(const PolarGrid& grid, const std::function<double(Complex)>& psi,
                                  const AdmissibleDatum& datum);

/// A straight-segment tree: interior vertices plus edges. Vertex ids below
/// vertices.size() are interior, id vertices.size() + i is boundary zero i.
struct TreeModel {
  std::vector<double> zeros;
  std::vector<Complex> vertices;
  std::vector<std::pair<int, int>> edges;
};

/// Densities of the partition cut out by the tree: species i owns the face
/// between zeros i and i+1 and has density equal to the distance to the tree,
/// scaled by `amplitude`; boundary samples follow the same rule.
DensityGrid tree_densities(const PolarGrid& grid, const TreeModel& tree, double amplitude = 1.0);

/// Uniform [0, 1) from the top 53 bits; identical on every standard library.
double uniform01(std::mt19937_64& rng);

/// k arcs with random widths (each at least a quarter of the mean), random
/// rotation, bump_sin or bump_poly profiles with amplitudes in [0.5, 1.5).
AdmissibleDatum random_datum(int k, std::mt19937_64& rng);

/// Uniform by area in the disk of radius max_radius.
Complex random_point(std::mt19937_64& rng, double max_radius = 0.9);

/// Zeros at pi/6 + i pi/3 with trees realizing the five k = 6 configurations.
TreeModel k6_tree_six();
TreeModel k6_tree_four_four();
TreeModel k6_tree_three_five();
TreeModel k6_tree_four_three_three();
TreeModel k6_tree_quad_triple();

}  // namespace segrega
