#include "segrega/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "segrega/error.hpp"

namespace segrega {

namespace {

double segment_distance(Complex x, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? ((x - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(x - (a + t * d));
}

bool inside(const std::vector<Complex>& poly, Complex x) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Complex a = poly[i];
    const Complex b = poly[j];
    if ((a.imag() > x.imag()) != (b.imag() > x.imag())) {
      const double xc = (b.real() - a.real()) * (x.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
      if (x.real() < xc) in = !in;
    }
  }
  return in;
}

std::vector<int> tree_path(const TreeModel& t, int from, int to) {
  const int n = static_cast<int>(t.vertices.size() + t.zeros.size());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : t.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<int> prev(static_cast<std::size_t>(n), -2);
  std::queue<int> q;
  q.push(from);
  prev[static_cast<std::size_t>(from)] = -1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (prev[static_cast<std::size_t>(w)] == -2) {
        prev[static_cast<std::size_t>(w)] = v;
        q.push(w);
      }
    }
  }
  if (prev[static_cast<std::size_t>(to)] == -2) throw Error(ErrorCode::ConfigError, "tree model is not connected");
  std::vector<int> path;
  for (int v = to; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<double> standard_zeros() {
  std::vector<double> z;
  for (int i = 0; i < 6; ++i) z.push_back(kPi / 6.0 + i * kPi / 3.0);
  return z;
}

}  // namespace

DensityGrid densities_from_signed(const PolarGrid& grid, const std::function<double(Complex)>& psi,
                                  const AdmissibleDatum& datum) {
  const int k = datum.k();
  const int nt = grid.n_theta();
  // Sign components, by flood fill on the 4-neighbour grid.
  const std::size_t n = grid.cells();
  std::vector<double> val(n);
  for (int m = 0; m < grid.n_r(); ++m) {
    for (int l = 0; l < nt; ++l) val[grid.index(m, l)] = psi(std::polar(grid.r(m), grid.theta(l)));
  }
  std::vector<int> comp(n, -1);
  int count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t c = 0; c < n; ++c) {
    if (comp[c] >= 0) continue;
    const bool pos = val[c] >= 0.0;
    comp[c] = count;
    stack.push_back(c);
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      const int m = static_cast<int>(a / static_cast<std::size_t>(nt));
      const int l = static_cast<int>(a % static_cast<std::size_t>(nt));
      std::size_t nb[4];
      int cnt = 0;
      nb[cnt++] = grid.index(m, grid.wrap(l + 1));
      nb[cnt++] = grid.index(m, grid.wrap(l - 1));
      if (m > 0) nb[cnt++] = grid.index(m - 1, l);
      if (m + 1 < grid.n_r()) nb[cnt++] = grid.index(m + 1, l);
      for (int q = 0; q < cnt; ++q) {
        if (comp[nb[q]] < 0 && (val[nb[q]] >= 0.0) == pos) {
          comp[nb[q]] = count;
          stack.push_back(nb[q]);
        }
      }
    }
    ++count;
  }
  // Map components to species through the arc midpoints on the last ring.
  std::vector<int> species_of(static_cast<std::size_t>(count), -1);
  for (int i = 0; i < k; ++i) {
    const Arc& a = datum.arcs()[static_cast<std::size_t>(i)];
    const double mid = normalize_angle(0.5 * (a.start + a.end));
    const int l = grid.wrap(static_cast<int>(std::lround(mid / grid.dtheta())));
    const int c = comp[grid.index(grid.n_r() - 1, l)];
    if (species_of[static_cast<std::size_t>(c)] >= 0) {
      throw Error(ErrorCode::MissingRegion, "a sign component of psi touches arcs " +
                                                std::to_string(species_of[static_cast<std::size_t>(c)]) + " and " +
                                                std::to_string(i));
    }
    species_of[static_cast<std::size_t>(c)] = i;
  }
  DensityGrid g = DensityGrid::from_datum(datum, grid);
  for (std::size_t c = 0; c < n; ++c) {
    const int i = species_of[static_cast<std::size_t>(comp[c])];
    if (i < 0) throw Error(ErrorCode::MissingRegion, "a sign component of psi touches no boundary arc");
    g.at(c, i) = std::abs(val[c]);
  }
  for (int l = 0; l < nt; ++l) {
    for (int i = 0; i < k; ++i) {
      g.boundary[static_cast<std::size_t>(l) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] = 0.0;
    }
    const double v = psi(std::polar(1.0, grid.theta(l)));
    const int i = datum.species_at(grid.theta(l));
    g.boundary[static_cast<std::size_t>(l) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] = std::abs(v);
  }
  return g;
}

DensityGrid tree_densities(const PolarGrid& grid, const TreeModel& tree, double amplitude) {
  const int k = static_cast<int>(tree.zeros.size());
  const int nv = static_cast<int>(tree.vertices.size());
  auto point = [&](int v) {
    return v < nv ? tree.vertices[static_cast<std::size_t>(v)] : std::polar(1.0, tree.zeros[static_cast<std::size_t>(v - nv)]);
  };
  std::vector<std::vector<Complex>> polys(static_cast<std::size_t>(k));
  std::vector<std::vector<std::pair<Complex, Complex>>> segs(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double z0 = tree.zeros[static_cast<std::size_t>(i)];
    double z1 = tree.zeros[static_cast<std::size_t>((i + 1) % k)];
    while (z1 <= z0) z1 += kTwoPi;
    auto& poly = polys[static_cast<std::size_t>(i)];
    const int arc_pts = 256;
    for (int q = 0; q <= arc_pts; ++q) poly.push_back(std::polar(1.0, z0 + (z1 - z0) * q / arc_pts));
    const auto path = tree_path(tree, nv + (i + 1) % k, nv + i);
    for (std::size_t q = 1; q + 1 < path.size(); ++q) poly.push_back(point(path[q]));
    for (std::size_t q = 0; q + 1 < path.size(); ++q) {
      segs[static_cast<std::size_t>(i)].emplace_back(point(path[q]), point(path[q + 1]));
    }
  }
  auto dist_to_tree = [&](int i, Complex x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : segs[static_cast<std::size_t>(i)]) d = std::min(d, segment_distance(x, a, b));
    return d;
  };

  DensityGrid g = DensityGrid::zeros(grid, k);
  for (int m = 0; m < grid.n_r(); ++m) {
    for (int l = 0; l < grid.n_theta(); ++l) {
      const Complex x = std::polar(grid.r(m), grid.theta(l));
      for (int i = 0; i < k; ++i) {
        if (inside(polys[static_cast<std::size_t>(i)], x)) {
          g.at(grid.index(m, l), i) = amplitude * dist_to_tree(i, x);
          break;
        }
      }
    }
  }
  for (int l = 0; l < grid.n_theta(); ++l) {
    const double t = grid.theta(l);
    for (int i = 0; i < k; ++i) {
      const double z0 = tree.zeros[static_cast<std::size_t>(i)];
      const double z1 = tree.zeros[static_cast<std::size_t>((i + 1) % k)];
      const double len = normalize_angle(z1 - z0);
      if (normalize_angle(t - z0) < len) {
        g.boundary[static_cast<std::size_t>(l) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] =
            amplitude * dist_to_tree(i, std::polar(1.0, t));
        break;
      }
    }
  }
  return g;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

AdmissibleDatum random_datum(int k, std::mt19937_64& rng) {
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (double& x : w) {
    x = 0.25 + uniform01(rng);
    total += x;
  }
  double start = kTwoPi * uniform01(rng);
  std::vector<Arc> arcs;
  std::vector<BoundaryProfile> profiles;
  for (int i = 0; i < k; ++i) {
    const double len = kTwoPi * w[static_cast<std::size_t>(i)] / total;
    const double end = i + 1 == k ? arcs.front().start + kTwoPi : start + len;
    arcs.push_back({start, end});
    start = end;
    const auto shape = uniform01(rng) < 0.5 ? ProfileShape::BumpSin : ProfileShape::BumpPoly;
    profiles.push_back({shape, 0.5 + uniform01(rng), {}});
  }
  return AdmissibleDatum::build(k, std::move(arcs), std::move(profiles));
}

Complex random_point(std::mt19937_64& rng, double max_radius) {
  const double r = max_radius * std::sqrt(uniform01(rng));
  return std::polar(r, kTwoPi * uniform01(rng));
}

TreeModel k6_tree_six() { return {standard_zeros(), {Complex(0.0, 0.0)}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}}}; }

// Zeros sit at 30, 90, 150, 210, 270, 330 degrees; ids 1 + i (or 2 + i, ...) below.
TreeModel k6_tree_four_four() {
  // a = 0 on the left takes 150, 210, 270; b = 1 on the right takes 330, 30, 90.
  return {standard_zeros(),
          {Complex(-0.3, -0.1), Complex(0.3, 0.1)},
          {{0, 1}, {0, 2 + 2}, {0, 2 + 3}, {0, 2 + 4}, {1, 2 + 5}, {1, 2 + 0}, {1, 2 + 1}}};
}

TreeModel k6_tree_three_five() {
  // a = 0 (degree 3) takes 150, 210; b = 1 (degree 5) takes the other four.
  return {standard_zeros(),
          {Complex(-0.45, 0.0), Complex(0.15, 0.0)},
          {{0, 1}, {0, 2 + 2}, {0, 2 + 3}, {1, 2 + 4}, {1, 2 + 5}, {1, 2 + 0}, {1, 2 + 1}}};
}

TreeModel k6_tree_four_three_three() {
  // a = 0 (degree 4) at the centre takes 90 and 270; b = 1 takes 150, 210; c = 2 takes 330, 30.
  return {standard_zeros(),
          {Complex(0.0, 0.0), Complex(-0.4, 0.0), Complex(0.4, 0.0)},
          {{0, 1}, {0, 2}, {0, 3 + 1}, {0, 3 + 4}, {1, 3 + 2}, {1, 3 + 3}, {2, 3 + 5}, {2, 3 + 0}}};
}

TreeModel k6_tree_quad_triple() {
  // Central triple point joined to three triple points, each taking two adjacent zeros.
  const Complex b = std::polar(0.4, kPi / 3.0);
  const Complex c = std::polar(0.4, kPi);
  const Complex d = std::polar(0.4, -kPi / 3.0);
  return {standard_zeros(),
          {Complex(0.0, 0.0), b, c, d},
          {{0, 1}, {0, 2}, {0, 3}, {1, 4 + 0}, {1, 4 + 1}, {2, 4 + 2}, {2, 4 + 3}, {3, 4 + 4}, {3, 4 + 5}}};
}

}  // namespace segrega
