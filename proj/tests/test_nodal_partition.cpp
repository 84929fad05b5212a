#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "segrega/error.hpp"
#include "segrega/models.hpp"
#include "segrega/nodal_partition.hpp"

using namespace segrega;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ParseError;
}

std::vector<int> interior_multiset(const NodalPartition& p) {
  std::vector<int> out;
  for (const auto& mp : p.multiple_points) out.push_back(mp.multiplicity);
  std::sort(out.begin(), out.end());
  return out;
}

double r3cos3(Complex z) { return std::pow(std::abs(z), 3) * std::cos(3 * std::arg(z)); }

}  // namespace

TEST_CASE("|r^3 cos 3theta| partitions into six sectors with one 6-point") {
  const PolarGrid grid(64, 192);
  const auto field = solve_dirichlet([](double t) { return std::cos(3 * t); }, 16, QuadratureRule(256));
  const auto zeros = AlternatingDatum::cosine_mode(3).base().zeros();
  const auto part = extract_signed_partition(field, grid, zeros);
  CHECK(part.regions == 6);
  REQUIRE(part.multiple_points.size() == 1);
  CHECK(part.multiple_points[0].multiplicity == 6);
  CHECK(std::abs(part.multiple_points[0].location) < 3 * grid.dr());
  CHECK(part.interfaces.size() == 6);
  CHECK(multiplicity(part, 0.0, 0.2) == 6);
  CHECK(multiplicity(part, std::polar(0.5, kPi / 3), 0.05) == 1);
  CHECK(multiplicity(part, std::polar(0.5, kPi / 6), 0.1) == 2);

  const auto g = build_graph(part);
  CHECK(g.n == 7);
  CHECK(g.m_edges == 12);
  CHECK(g.f == 7);
  CHECK(g.euler() == 2);
  CHECK(g.tree);
  CHECK(g.leaves == 6);
  const auto id = verify_multiplicity_identity(part);
  CHECK(id.holds);
  CHECK(id.sum_index == 4);
  CHECK(id.expected == 4);
  CHECK(id.even_ok);
  CHECK(classify_k6(part) == K6Class::Six);
}

TEST_CASE("two species from the solver") {
  const auto d = AdmissibleDatum::symmetric(2, 0.3);
  const PolarGrid grid(32, 64);
  const auto steps = continuation(d, {1.0, 100.0, 10000.0}, grid);
  const auto part = extract_partition(steps.back().state, d);
  CHECK(part.regions == 2);
  CHECK(part.multiple_points.empty());
  CHECK(part.interfaces.size() == 1);
  const auto g = build_graph(part);
  CHECK(g.n == 2);
  CHECK(g.m_edges == 3);
  CHECK(g.f == 3);
  const auto id = verify_multiplicity_identity(part);
  CHECK(id.sum_index == 0);
  CHECK(id.holds);
  CHECK(id.arcs == id.expected_arcs);

  const auto rep = gradient_reflection_check(steps.back().state, part);
  REQUIRE_FALSE(rep.samples.empty());
  CHECK(rep.median_mismatch < 0.05);
  CHECK(rep.median_angle_error < 0.05);
}

TEST_CASE("tree models realise the five configurations") {
  struct Case {
    TreeModel tree;
    K6Class cls;
    std::vector<int> multiset;
    int n, m;
  };
  const std::vector<Case> cases = {
      {k6_tree_six(), K6Class::Six, {6}, 7, 12},
      {k6_tree_four_four(), K6Class::FourFour, {4, 4}, 8, 13},
      {k6_tree_three_five(), K6Class::ThreeFive, {3, 5}, 8, 13},
      {k6_tree_four_three_three(), K6Class::FourThreeThree, {3, 3, 4}, 9, 14},
      {k6_tree_quad_triple(), K6Class::QuadTriple, {3, 3, 3, 3}, 10, 15},
  };
  const PolarGrid grid(64, 256);
  for (const auto& c : cases) {
    const auto part = extract_partition(tree_densities(grid, c.tree), c.tree.zeros);
    CHECK(interior_multiset(part) == c.multiset);
    const auto g = build_graph(part);
    CHECK(g.n == c.n);
    CHECK(g.m_edges == c.m);
    CHECK(g.f == 7);
    CHECK(g.euler() == 2);
    CHECK(g.tree);
    const auto id = verify_multiplicity_identity(part);
    CHECK(id.holds);
    CHECK(id.sum_index == 4);
    CHECK(id.arcs == 6 + id.z3_interior - 1);
    CHECK(id.z3_nonempty);
    CHECK(id.z3_bound);
    CHECK(classify_k6(part) == c.cls);
  }
}

TEST_CASE("classification of multisets") {
  CHECK(classify_k6(std::vector<int>{6}) == K6Class::Six);
  CHECK(classify_k6(std::vector<int>{4, 4}) == K6Class::FourFour);
  CHECK(classify_k6(std::vector<int>{5, 3}) == K6Class::ThreeFive);
  CHECK(classify_k6(std::vector<int>{3, 4, 3}) == K6Class::FourThreeThree);
  CHECK(classify_k6(std::vector<int>{3, 3, 3, 3}) == K6Class::QuadTriple);
  CHECK(code_of([] { classify_k6(std::vector<int>{4, 4, 3}); }) == ErrorCode::UnclassifiableMultiset);
  CHECK(code_of([] { classify_k6(std::vector<int>{}); }) == ErrorCode::UnclassifiableMultiset);
}

TEST_CASE("local exponent of model functions") {
  const auto six = local_exponent_fit([](Complex z) { return std::abs(r3cos3(z)); }, 0.0, 6);
  CHECK(six.exponent == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(six.residual < 1e-6);
  CHECK(six.exponent_ok);
  const auto four = local_exponent_fit(
      [](Complex z) { return std::abs(std::norm(z) * std::cos(2 * std::arg(z) + 0.4)); }, 0.0, 4);
  CHECK(four.exponent == doctest::Approx(2.0).epsilon(1e-6));
  // the fitted phase reproduces the profile: |cos(2 (theta + theta0))| with theta0 = 0.2 mod pi/2
  CHECK(std::abs(std::cos(2 * (0.3 + four.phase))) == doctest::Approx(std::abs(std::cos(0.6 + 0.4))).epsilon(1e-6));
  CHECK(code_of([] { local_exponent_fit([](Complex z) { return std::abs(z.real()) + 0.5; }, 0.0, 6); }) ==
        ErrorCode::FitFailure);
}

TEST_CASE("reflection of x1 split into positive and negative parts") {
  const PolarGrid grid(64, 128);
  const auto datum = AlternatingDatum::cosine_mode(1).base();
  const auto state = densities_from_signed(grid, [](Complex z) { return z.real(); }, datum);
  const auto part = extract_partition(state, datum);
  const auto rep = gradient_reflection_check(state, part);
  REQUIRE_FALSE(rep.samples.empty());
  // one-sided gradients come from bilinear sampling of the cell values
  CHECK(rep.max_angle_error < 1e-2);
  CHECK(rep.max_mismatch < 1e-3);
  CHECK(rep.min_grad_norm == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("|grad U| vanishes approaching the 6-point like r^2") {
  const PolarGrid grid(96, 288);
  const auto datum = AlternatingDatum::cosine_mode(3).base();
  const auto state = densities_from_signed(grid, r3cos3, datum);
  const auto part = extract_partition(state, datum);
  const auto rep = gradient_reflection_check(state, part);
  REQUIRE(rep.decay_near_points.size() == 1);
  const auto [outer, inner] = rep.decay_near_points[0];
  // radii r and r/4: ratio 16 for |grad U| ~ 3 r^2
  CHECK(outer / inner == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("stored labels are checked") {
  const PolarGrid grid(32, 64);
  const auto d = AdmissibleDatum::symmetric(2);
  const auto st = solve(d, 0.0, grid).state;
  const auto part = extract_partition(st, d);
  auto labels = part.labels;
  CHECK_NOTHROW(partition_from_labels(grid, 2, labels, part.zeros, part.U, part.U_boundary, part.amplitude));
  std::replace(labels.begin(), labels.end(), 1, kUnassigned);
  CHECK(code_of([&] { partition_from_labels(grid, 2, labels, part.zeros, part.U, part.U_boundary, part.amplitude); }) ==
        ErrorCode::MissingRegion);
  labels = part.labels;
  // an island of species 1 deep inside species 0
  // middle of the arc of species 0, well away from the interface
  std::size_t island = grid.index(24, 16);
  if (labels[island] != 0) island = grid.index(24, 48);
  REQUIRE(labels[island] == 0);
  labels[island] = 1;
  CHECK(code_of([&] { partition_from_labels(grid, 2, labels, part.zeros, part.U, part.U_boundary, part.amplitude); }) ==
        ErrorCode::DisconnectedRegion);
  labels[island] = 7;
  CHECK(code_of([&] { partition_from_labels(grid, 2, labels, part.zeros, part.U, part.U_boundary, part.amplitude); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("signed fields: generalised identity with fewer regions than species") {
  // Re(z^2) has four sign regions; as a k = 6 trace (s = 3) it gives rho = 4 and one 4-point
  const PolarGrid grid(64, 192);
  const auto field = solve_dirichlet([](double t) { return std::cos(2 * t); }, 16, QuadratureRule(256));
  const std::vector<double> zeros = {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4};
  const auto part = extract_signed_partition(field, grid, zeros);
  CHECK(part.regions == 4);
  REQUIRE(part.multiple_points.size() == 1);
  CHECK(part.multiple_points[0].multiplicity == 4);
  const auto id = verify_multiplicity_identity(part);
  CHECK(id.sum_index == 2);
  CHECK(id.holds);
}
