#include "segrega/nodal_partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "segrega/error.hpp"
#include "segrega/log.hpp"

namespace segrega {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

Complex centre(const PolarGrid& g, std::size_t cell) {
  const int m = static_cast<int>(cell / static_cast<std::size_t>(g.n_theta()));
  const int l = static_cast<int>(cell % static_cast<std::size_t>(g.n_theta()));
  return std::polar(g.r(m), g.theta(l));
}

int ring_of(const PolarGrid& g, std::size_t cell) { return static_cast<int>(cell / static_cast<std::size_t>(g.n_theta())); }

double local_size(const PolarGrid& g, double radius) {
  const int m = std::clamp(static_cast<int>(radius / g.dr()), 0, g.n_r() - 1);
  return g.cell_size(m);
}

std::size_t cell_at(const PolarGrid& g, Complex x) {
  const int m = std::clamp(static_cast<int>(std::abs(x) / g.dr()), 0, g.n_r() - 1);
  const int l = g.wrap(static_cast<int>(std::lround(normalize_angle(std::arg(x)) / g.dtheta())));
  return g.index(m, l);
}

// 4-neighbours with the seam wrapped; no link across the centre.
template <typename F>
void for_neighbours(const PolarGrid& g, std::size_t cell, F&& f) {
  const int m = ring_of(g, cell);
  const int l = static_cast<int>(cell % static_cast<std::size_t>(g.n_theta()));
  f(g.index(m, g.wrap(l + 1)));
  f(g.index(m, g.wrap(l - 1)));
  if (m > 0) f(g.index(m - 1, l));
  if (m + 1 < g.n_r()) f(g.index(m + 1, l));
}

// Cells whose centres lie within `radius` of x.
template <typename F>
void for_cells_near(const PolarGrid& g, Complex x, double radius, F&& f) {
  const double rho = std::abs(x);
  const int m_lo = std::max(0, static_cast<int>(std::floor((rho - radius) / g.dr() - 0.5)));
  const int m_hi = std::min(g.n_r() - 1, static_cast<int>(std::ceil((rho + radius) / g.dr() - 0.5)));
  const double phi = normalize_angle(std::arg(x));
  for (int m = m_lo; m <= m_hi; ++m) {
    const double rm = g.r(m);
    int span;
    if (rm <= radius || rho <= radius) {
      span = g.n_theta() / 2;
    } else {
      const double half = std::asin(std::min(1.0, radius / rm));
      span = std::min(g.n_theta() / 2, static_cast<int>(std::ceil(half / g.dtheta())) + 1);
    }
    const int l0 = static_cast<int>(std::lround(phi / g.dtheta()));
    const int lo = span >= g.n_theta() / 2 ? 0 : l0 - span;
    const int hi = span >= g.n_theta() / 2 ? g.n_theta() - 1 : l0 + span;
    for (int l = lo; l <= hi; ++l) {
      const std::size_t c = g.index(m, g.wrap(l));
      if (std::abs(centre(g, c) - x) <= radius) f(c);
    }
  }
}

// Connected components of equal values in `map` (cells with kUnassigned skipped).
std::vector<int> components(const PolarGrid& g, const std::vector<int>& map, int& count) {
  std::vector<int> comp(map.size(), kUnassigned);
  count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t c = 0; c < map.size(); ++c) {
    if (map[c] == kUnassigned || comp[c] != kUnassigned) continue;
    comp[c] = count;
    stack.push_back(c);
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for_neighbours(g, a, [&](std::size_t b) {
        if (comp[b] == kUnassigned && map[b] == map[a]) {
          comp[b] = count;
          stack.push_back(b);
        }
      });
    }
    ++count;
  }
  return comp;
}

// Multi-source Dijkstra over centre distances: every unassigned cell takes
// the label of the nearest labelled cell (lowest label on ties).
std::vector<int> fill_corridor(const PolarGrid& g, const std::vector<int>& labels) {
  std::vector<int> out = labels;
  std::vector<double> dist(labels.size(), std::numeric_limits<double>::infinity());
  using Item = std::tuple<double, int, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (labels[c] != kUnassigned) {
      dist[c] = 0.0;
      pq.emplace(0.0, labels[c], c);
    }
  }
  std::vector<bool> done(labels.size(), false);
  while (!pq.empty()) {
    const auto [d, lab, c] = pq.top();
    pq.pop();
    if (done[c]) continue;
    done[c] = true;
    out[c] = lab;
    const Complex xc = centre(g, c);
    for_neighbours(g, c, [&](std::size_t b) {
      if (done[b]) return;
      const double nd = d + std::abs(centre(g, b) - xc);
      if (nd < dist[b] || (nd == dist[b] && lab < out[b])) {
        dist[b] = nd;
        out[b] = lab;
        pq.emplace(nd, lab, b);
      }
    });
  }
  return out;
}

std::string graph_dump(const NodalPartition& p) {
  std::ostringstream os;
  os << "k=" << p.k << " regions=" << p.regions << " interior points:";
  for (const auto& mp : p.multiple_points) {
    os << " (" << mp.location.real() << "," << mp.location.imag() << ") m=" << mp.multiplicity << ";";
  }
  os << " boundary points:";
  for (const auto& bp : p.boundary_points) os << " z" << bp.zero_index << " m=" << bp.multiplicity << ";";
  os << " interfaces:";
  for (const auto& itf : p.interfaces) {
    os << " [" << itf.region_a << "|" << itf.region_b << " ends";
    for (int e : itf.ends) os << " " << e;
    os << "]";
  }
  return os.str();
}

void locate_multiple_points(NodalPartition& p, const PartitionOptions& opt) {
  const PolarGrid& g = p.grid;
  const std::size_t n = g.cells();

  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < n; ++c) {
    bool border = false;
    for_neighbours(g, c, [&](std::size_t b) { border = border || p.filled[b] != p.filled[c]; });
    if (!border) continue;
    const double radius = opt.candidate_radius * g.cell_size(ring_of(g, c));
    std::set<int> seen;
    for_cells_near(g, centre(g, c), radius, [&](std::size_t b) { seen.insert(p.filled[b]); });
    if (seen.size() >= 3) candidates.push_back(c);
  }

  UnionFind uf(candidates.size());
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      const double lim = opt.cluster_radius * std::max(g.cell_size(ring_of(g, candidates[a])),
                                                       g.cell_size(ring_of(g, candidates[b])));
      if (std::abs(centre(g, candidates[a]) - centre(g, candidates[b])) <= lim) uf.unite(a, b);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> clusters;
  for (std::size_t a = 0; a < candidates.size(); ++a) clusters[uf.find(a)].push_back(candidates[a]);

  const double boundary_size = g.cell_size(g.n_r() - 1);
  for (const auto& [root, cells] : clusters) {
    Complex c0(0.0);
    for (std::size_t c : cells) c0 += centre(g, c);
    c0 /= static_cast<double>(cells.size());
    bool at_zero = false;
    for (double z : p.zeros) {
      if (std::abs(c0 - std::polar(1.0, z)) <= opt.zero_radius * boundary_size) at_zero = true;
    }
    if (at_zero) continue;
    const double radius = opt.multiplicity_radius * local_size(g, std::abs(c0));
    const int mult = multiplicity(p, c0, radius);
    if (mult < 3) {
      logger().debug("junction candidate at ({:.4f}, {:.4f}) has stable multiplicity {}; dropped", c0.real(),
                     c0.imag(), mult);
      continue;
    }
    MultiplePoint mp;
    mp.location = c0;
    mp.multiplicity = mult;
    p.multiple_points.push_back(mp);
  }
  std::sort(p.multiple_points.begin(), p.multiple_points.end(), [](const MultiplePoint& a, const MultiplePoint& b) {
    return std::make_tuple(a.location.real(), a.location.imag()) < std::make_tuple(b.location.real(), b.location.imag());
  });
}

void trace_interfaces(NodalPartition& p, const PartitionOptions& opt) {
  const PolarGrid& g = p.grid;
  struct Edge {
    std::size_t a;
    std::size_t b;
    Complex mid;
    double size;
  };
  std::map<std::pair<int, int>, std::vector<Edge>> by_pair;
  auto consider = [&](std::size_t a, std::size_t b) {
    int la = p.filled[a];
    int lb = p.filled[b];
    if (la == lb) return;
    if (lb < la) {
      std::swap(a, b);
      std::swap(la, lb);
    }
    const Complex mid = 0.5 * (centre(g, a) + centre(g, b));
    for (const auto& mp : p.multiple_points) {
      if (std::abs(mid - mp.location) <= opt.exclusion_radius * local_size(g, std::abs(mp.location))) return;
    }
    const double size = std::max(g.cell_size(ring_of(g, a)), g.cell_size(ring_of(g, b)));
    by_pair[{la, lb}].push_back({a, b, mid, size});
  };
  for (int m = 0; m < g.n_r(); ++m) {
    for (int l = 0; l < g.n_theta(); ++l) {
      const std::size_t c = g.index(m, l);
      consider(c, g.index(m, g.wrap(l + 1)));
      if (m + 1 < g.n_r()) consider(c, g.index(m + 1, l));
    }
  }

  const double boundary_size = g.cell_size(g.n_r() - 1);
  const int n_interior = static_cast<int>(p.multiple_points.size());
  for (auto& [pair, edges] : by_pair) {
    UnionFind uf(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        if (std::abs(edges[i].mid - edges[j].mid) <= 1.5 * std::max(edges[i].size, edges[j].size)) uf.unite(i, j);
      }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < edges.size(); ++i) groups[uf.find(i)].push_back(i);
    for (const auto& [root, members] : groups) {
      Interface itf;
      itf.region_a = pair.first;
      itf.region_b = pair.second;
      for (std::size_t i : members) itf.edges.emplace_back(edges[i].a, edges[i].b);

      auto min_dist = [&](Complex q) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i : members) d = std::min(d, std::abs(edges[i].mid - q));
        return d;
      };
      for (int v = 0; v < n_interior; ++v) {
        const Complex q = p.multiple_points[static_cast<std::size_t>(v)].location;
        if (min_dist(q) <= (opt.exclusion_radius + 2.0) * local_size(g, std::abs(q))) itf.ends.push_back(v);
      }
      for (std::size_t z = 0; z < p.zeros.size(); ++z) {
        if (min_dist(std::polar(1.0, p.zeros[z])) <= opt.zero_radius * boundary_size) {
          itf.ends.push_back(n_interior + static_cast<int>(z));
        }
      }

      // Polyline: greedy chain from the end nearest a vertex, then decimation.
      std::vector<Complex> pts;
      for (std::size_t i : members) pts.push_back(edges[i].mid);
      std::size_t start = 0;
      if (!itf.ends.empty()) {
        const int e = itf.ends.front();
        const Complex q = e < n_interior ? p.multiple_points[static_cast<std::size_t>(e)].location
                                         : std::polar(1.0, p.zeros[static_cast<std::size_t>(e - n_interior)]);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (std::abs(pts[i] - q) < best) {
            best = std::abs(pts[i] - q);
            start = i;
          }
        }
      }
      std::vector<bool> used(pts.size(), false);
      std::vector<Complex> chain;
      std::size_t cur = start;
      for (std::size_t step = 0; step < pts.size(); ++step) {
        used[cur] = true;
        chain.push_back(pts[cur]);
        double best = std::numeric_limits<double>::infinity();
        std::size_t next = cur;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (!used[i] && std::abs(pts[i] - pts[cur]) < best) {
            best = std::abs(pts[i] - pts[cur]);
            next = i;
          }
        }
        if (next == cur) break;
        cur = next;
      }
      // Douglas-Peucker with a one-cell tolerance.
      std::vector<bool> keep(chain.size(), chain.size() <= 2);
      if (chain.size() > 2) {
        keep.front() = keep.back() = true;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{0, chain.size() - 1}};
        while (!stack.empty()) {
          const auto [i0, i1] = stack.back();
          stack.pop_back();
          const Complex a = chain[i0];
          const Complex d = chain[i1] - a;
          double worst = 0.0;
          std::size_t at = i0;
          for (std::size_t i = i0 + 1; i < i1; ++i) {
            const Complex v = chain[i] - a;
            const double dist = std::abs(d) > 0.0 ? std::abs((std::conj(d) * v).imag()) / std::abs(d) : std::abs(v);
            if (dist > worst) {
              worst = dist;
              at = i;
            }
          }
          if (worst > local_size(g, std::abs(chain[at]))) {
            keep[at] = true;
            stack.emplace_back(i0, at);
            stack.emplace_back(at, i1);
          }
        }
      }
      for (std::size_t i = 0; i < chain.size(); ++i) {
        if (keep[i]) itf.polyline.push_back(chain[i]);
      }
      p.interfaces.push_back(std::move(itf));
    }
  }

  p.boundary_points.clear();
  for (std::size_t z = 0; z < p.zeros.size(); ++z) {
    int deg = 0;
    for (const auto& itf : p.interfaces) {
      deg += static_cast<int>(std::count(itf.ends.begin(), itf.ends.end(), n_interior + static_cast<int>(z)));
    }
    MultiplePoint bp;
    bp.location = std::polar(1.0, p.zeros[z]);
    bp.on_boundary = true;
    bp.zero_index = static_cast<int>(z);
    bp.multiplicity = deg + 1;
    p.boundary_points.push_back(bp);
  }
}

void finish(NodalPartition& p, const PartitionOptions& opt) {
  p.region_cells.assign(static_cast<std::size_t>(p.regions), 0);
  for (int lab : p.labels) {
    if (lab != kUnassigned) ++p.region_cells[static_cast<std::size_t>(lab)];
  }
  locate_multiple_points(p, opt);
  trace_interfaces(p, opt);
}

// Every species must own exactly one connected set of labelled cells.
void check_regions(NodalPartition& p) {
  const std::size_t n = p.grid.cells();
  int count = 0;
  const std::vector<int> comp = components(p.grid, p.labels, count);
  std::vector<std::set<int>> per_species(static_cast<std::size_t>(p.k));
  std::map<int, std::size_t> comp_size;
  for (std::size_t c = 0; c < n; ++c) {
    if (p.labels[c] == kUnassigned) continue;
    per_species[static_cast<std::size_t>(p.labels[c])].insert(comp[c]);
    ++comp_size[comp[c]];
  }
  for (int i = 0; i < p.k; ++i) {
    const auto& s = per_species[static_cast<std::size_t>(i)];
    if (s.empty()) {
      throw Error(ErrorCode::MissingRegion, "species " + std::to_string(i) + " has no labelled cell (threshold " +
                                                fmt::format("{:.3e}", p.threshold) + ")");
    }
    if (s.size() > 1) {
      std::string sizes;
      for (int c : s) sizes += " " + std::to_string(comp_size[c]);
      throw Error(ErrorCode::DisconnectedRegion,
                  "species " + std::to_string(i) + " splits into " + std::to_string(s.size()) + " components (cells:" +
                      sizes + ")");
    }
  }
  p.regions = p.k;
}

}  // namespace

NodalPartition extract_partition(const DensityGrid& state, const AdmissibleDatum& datum,
                                 const PartitionOptions& options) {
  return extract_partition(state, datum.zeros(), options);
}

NodalPartition extract_partition(const DensityGrid& state, const std::vector<double>& zeros,
                                 const PartitionOptions& options) {
  NodalPartition p;
  p.grid = state.grid;
  p.k = state.k;
  p.source = PartitionSource::Densities;
  p.zeros = zeros;
  p.amplitude = state.max_boundary();
  p.threshold = options.threshold_rel * p.amplitude;
  p.U = state.total();
  p.U_boundary.assign(static_cast<std::size_t>(state.grid.n_theta()), 0.0);
  for (int l = 0; l < state.grid.n_theta(); ++l) {
    for (int i = 0; i < state.k; ++i) p.U_boundary[static_cast<std::size_t>(l)] += state.bnd(l, i);
  }

  const std::size_t n = state.grid.cells();
  p.labels.assign(n, kUnassigned);
  for (std::size_t c = 0; c < n; ++c) {
    int best = kUnassigned;
    double bv = p.threshold;
    for (int i = 0; i < state.k; ++i) {
      if (state.at(c, i) > bv) {
        bv = state.at(c, i);
        best = i;
      }
    }
    p.labels[c] = best;
  }

  check_regions(p);
  p.filled = fill_corridor(state.grid, p.labels);
  finish(p, options);
  return p;
}

NodalPartition partition_from_labels(const PolarGrid& grid, int k, std::vector<int> labels,
                                     const std::vector<double>& zeros, std::vector<double> U,
                                     std::vector<double> U_boundary, double amplitude, const PartitionOptions& options) {
  if (labels.size() != grid.cells() || U.size() != grid.cells() ||
      U_boundary.size() != static_cast<std::size_t>(grid.n_theta())) {
    throw Error(ErrorCode::ParseError, "label or field size does not match the grid");
  }
  for (int lab : labels) {
    if (lab != kUnassigned && (lab < 0 || lab >= k)) {
      throw Error(ErrorCode::ParseError, "label " + std::to_string(lab) + " outside [0, k)");
    }
  }
  NodalPartition p;
  p.grid = grid;
  p.k = k;
  p.source = PartitionSource::Densities;
  p.zeros = zeros;
  p.amplitude = amplitude;
  p.threshold = options.threshold_rel * amplitude;
  p.labels = std::move(labels);
  p.U = std::move(U);
  p.U_boundary = std::move(U_boundary);
  check_regions(p);
  p.filled = fill_corridor(grid, p.labels);
  finish(p, options);
  return p;
}

NodalPartition extract_signed_partition(const PolarGrid& grid, const std::vector<double>& psi,
                                        const std::vector<double>& psi_boundary, const std::vector<double>& zeros,
                                        const PartitionOptions& options) {
  NodalPartition p;
  p.grid = grid;
  p.source = PartitionSource::SignedField;
  p.zeros = zeros;
  p.k = static_cast<int>(zeros.size());
  for (double v : psi_boundary) p.amplitude = std::max(p.amplitude, std::abs(v));
  p.threshold = options.threshold_rel * p.amplitude;
  p.U.resize(psi.size());
  for (std::size_t c = 0; c < psi.size(); ++c) p.U[c] = std::abs(psi[c]);
  p.U_boundary.resize(psi_boundary.size());
  for (std::size_t l = 0; l < psi_boundary.size(); ++l) p.U_boundary[l] = std::abs(psi_boundary[l]);

  std::vector<int> sign(psi.size());
  for (std::size_t c = 0; c < psi.size(); ++c) sign[c] = psi[c] >= 0.0 ? 1 : 0;
  int count = 0;
  p.filled = components(grid, sign, count);
  p.regions = count;
  p.region_sign.assign(static_cast<std::size_t>(count), 0);
  for (std::size_t c = 0; c < psi.size(); ++c) p.region_sign[static_cast<std::size_t>(p.filled[c])] = sign[c] ? 1 : -1;
  p.labels = p.filled;
  for (std::size_t c = 0; c < psi.size(); ++c) {
    if (p.U[c] <= p.threshold) p.labels[c] = kUnassigned;
  }
  finish(p, options);
  return p;
}

NodalPartition extract_signed_partition(const FourierField& field, const PolarGrid& grid,
                                        const std::vector<double>& zeros, const PartitionOptions& options) {
  const auto psi = sample_cells(grid, [&](double r, double t) { return field.eval(std::polar(r, t)); });
  std::vector<double> bnd(static_cast<std::size_t>(grid.n_theta()));
  for (int l = 0; l < grid.n_theta(); ++l) bnd[static_cast<std::size_t>(l)] = field.eval(std::polar(1.0, grid.theta(l)));
  return extract_signed_partition(grid, psi, bnd, zeros, options);
}

int multiplicity(const NodalPartition& p, Complex x, double radius) {
  int counts[3];
  for (int i = 0; i < 3; ++i) {
    const double r = radius / static_cast<double>(1 << i);  // r, r/2, r/4
    std::set<int> seen;
    for_cells_near(p.grid, x, r, [&](std::size_t c) { seen.insert(p.filled[c]); });
    if (seen.empty()) {
      // Radius below the cell size: use the nearest cell.
      double best = std::numeric_limits<double>::infinity();
      int lab = kUnassigned;
      for_cells_near(p.grid, x, 2.0 * local_size(p.grid, std::abs(x)), [&](std::size_t c) {
        const double d = std::abs(centre(p.grid, c) - x);
        if (d < best) {
          best = d;
          lab = p.filled[c];
        }
      });
      seen.insert(lab);
    }
    counts[i] = static_cast<int>(seen.size());
  }
  if (counts[0] != counts[1] || counts[1] != counts[2]) {
    throw Error(ErrorCode::UnstableMultiplicity,
                fmt::format("counts {}, {}, {} at radii {:.4g}, {:.4g}, {:.4g} around ({:.4f}, {:.4f}); refine the grid",
                            counts[0], counts[1], counts[2], radius, radius / 2, radius / 4, x.real(), x.imag()));
  }
  return counts[0];
}

PartitionGraph build_graph(const NodalPartition& p) {
  PartitionGraph gr;
  gr.interior_vertices = static_cast<int>(p.multiple_points.size());
  gr.boundary_vertices = static_cast<int>(p.zeros.size());
  gr.n = gr.interior_vertices + gr.boundary_vertices;
  gr.interface_edges = static_cast<int>(p.interfaces.size());
  gr.m_edges = gr.interface_edges + gr.boundary_vertices;
  gr.f = p.regions + 1;
  gr.adjacency.assign(static_cast<std::size_t>(gr.n), {});

  UnionFind uf(static_cast<std::size_t>(gr.n));
  bool cycle = false;
  std::vector<int> degree(static_cast<std::size_t>(gr.n), 0);
  for (const auto& itf : p.interfaces) {
    if (itf.ends.size() != 2) {
      ++gr.dangling;
      continue;
    }
    const int a = itf.ends[0];
    const int b = itf.ends[1];
    gr.adjacency[static_cast<std::size_t>(a)].push_back(b);
    gr.adjacency[static_cast<std::size_t>(b)].push_back(a);
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
    if (!uf.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) cycle = true;
  }
  const int z = gr.boundary_vertices;
  for (int i = 0; i < z; ++i) {
    const int a = gr.interior_vertices + i;
    const int b = gr.interior_vertices + (i + 1) % z;
    gr.adjacency[static_cast<std::size_t>(a)].push_back(b);
    gr.adjacency[static_cast<std::size_t>(b)].push_back(a);
  }
  std::set<std::size_t> roots;
  for (int v = 0; v < gr.n; ++v) roots.insert(uf.find(static_cast<std::size_t>(v)));
  for (int v = 0; v < gr.n; ++v) gr.leaves += degree[static_cast<std::size_t>(v)] == 1 ? 1 : 0;
  bool leaves_are_zeros = true;
  for (int v = 0; v < gr.interior_vertices; ++v) leaves_are_zeros &= degree[static_cast<std::size_t>(v)] >= 3;
  for (int v = gr.interior_vertices; v < gr.n; ++v) leaves_are_zeros &= degree[static_cast<std::size_t>(v)] >= 1;
  gr.tree = !cycle && roots.size() == 1 && gr.dangling == 0 && leaves_are_zeros;

  gr.euler_ok = gr.dangling == 0 && gr.euler() == 2;
  if (!gr.euler_ok) {
    throw Error(ErrorCode::EulerViolation, fmt::format("n - m + f = {} - {} + {} = {} (dangling interfaces {}); {}",
                                                       gr.n, gr.m_edges, gr.f, gr.euler(), gr.dangling,
                                                       graph_dump(p)));
  }
  return gr;
}

IdentityReport verify_multiplicity_identity(const NodalPartition& p) {
  IdentityReport rep;
  for (const auto& mp : p.multiple_points) {
    rep.sum_index += mp.multiplicity - 2;
    rep.multiset.push_back(mp.multiplicity);
    ++rep.z3_interior;
  }
  for (const auto& bp : p.boundary_points) {
    rep.sum_index += bp.multiplicity - 2;
    if (bp.multiplicity >= 3) rep.multiset.push_back(bp.multiplicity);
  }
  std::sort(rep.multiset.rbegin(), rep.multiset.rend());
  rep.z3_count = static_cast<int>(rep.multiset.size());
  const int z = static_cast<int>(p.zeros.size());
  if (p.source == PartitionSource::Densities) {
    rep.expected = p.k - 2;
    rep.expected_arcs = p.k + rep.z3_interior - 1;
  } else {
    const int s = z / 2;
    rep.expected = 2 * p.regions - 2 - 2 * s;
    rep.expected_arcs = rep.z3_interior + p.regions - 1;
    int even = 0;
    for (const auto& mp : p.multiple_points) even += mp.multiplicity % 2 == 0 ? 1 : 0;
    rep.even_ok = even == rep.z3_interior;
    rep.count_ok = rep.z3_interior <= std::max(0, s - 1);
    if (s >= 2 && rep.z3_interior == s - 1) {
      for (const auto& mp : p.multiple_points) rep.four_points_ok &= mp.multiplicity == 4;
    }
  }
  rep.arcs = static_cast<int>(p.interfaces.size());
  rep.arcs_ok = rep.arcs == rep.expected_arcs;
  rep.holds = rep.sum_index == rep.expected;
  const int kk = p.source == PartitionSource::Densities ? p.k : p.regions;
  rep.z3_nonempty = kk < 3 || rep.z3_count >= 1;
  rep.z3_bound = kk < 3 || (rep.z3_count >= 1 && rep.z3_count <= kk - 2);
  if (!rep.holds) {
    throw Error(ErrorCode::IdentityViolation,
                fmt::format("sum of m(p) - 2 is {} but {} was expected; {}", rep.sum_index, rep.expected, graph_dump(p)));
  }
  return rep;
}

std::string_view to_string(K6Class c) {
  switch (c) {
    case K6Class::Six: return "SIX";
    case K6Class::FourFour: return "FOUR_FOUR";
    case K6Class::ThreeFive: return "THREE_FIVE";
    case K6Class::FourThreeThree: return "FOUR_THREE_THREE";
    case K6Class::QuadTriple: return "QUAD_TRIPLE";
  }
  return "SIX";
}

K6Class classify_k6(std::vector<int> multiset) {
  std::sort(multiset.rbegin(), multiset.rend());
  using V = std::vector<int>;
  if (multiset == V{6}) return K6Class::Six;
  if (multiset == V{4, 4}) return K6Class::FourFour;
  if (multiset == V{5, 3}) return K6Class::ThreeFive;
  if (multiset == V{4, 3, 3}) return K6Class::FourThreeThree;
  if (multiset == V{3, 3, 3, 3}) return K6Class::QuadTriple;
  std::string s;
  for (int m : multiset) s += (s.empty() ? "" : ",") + std::to_string(m);
  throw Error(ErrorCode::UnclassifiableMultiset, "multiplicities {" + s + "} match none of the five k = 6 cases");
}

K6Class classify_k6(const NodalPartition& p) {
  if (p.k != 6) throw Error(ErrorCode::SpeciesCountNot6, "classification needs k = 6, got " + std::to_string(p.k));
  std::vector<int> ms;
  for (const auto& mp : p.multiple_points) ms.push_back(mp.multiplicity);
  for (const auto& bp : p.boundary_points) {
    if (bp.multiplicity >= 3) ms.push_back(bp.multiplicity);
  }
  return classify_k6(ms);
}

GridSampler::GridSampler(const PolarGrid& grid, std::vector<double> field, std::vector<double> boundary)
    : grid_(grid), field_(std::move(field)), boundary_(std::move(boundary)) {}

double GridSampler::ring_value(int m, double t) const {
  const double fl = std::floor(t);
  const double w = t - fl;
  const int l0 = grid_.wrap(static_cast<int>(fl));
  const int l1 = grid_.wrap(l0 + 1);
  return (1.0 - w) * field_[grid_.index(m, l0)] + w * field_[grid_.index(m, l1)];
}

double GridSampler::boundary_value(double t) const {
  const double fl = std::floor(t);
  const double w = t - fl;
  const int l0 = grid_.wrap(static_cast<int>(fl));
  const int l1 = grid_.wrap(l0 + 1);
  return (1.0 - w) * boundary_[static_cast<std::size_t>(l0)] + w * boundary_[static_cast<std::size_t>(l1)];
}

double GridSampler::operator()(Complex x) const {
  const double rho = std::min(std::abs(x), 1.0);
  const double t = normalize_angle(std::arg(x)) / grid_.dtheta();
  const double s = rho / grid_.dr() - 0.5;
  if (s < 0.0) {
    const double r0 = grid_.r(0);
    const double va = ring_value(0, t);
    const double vb = ring_value(0, t + 0.5 * grid_.n_theta());
    return vb + (rho + r0) / (2.0 * r0) * (va - vb);
  }
  const int last = grid_.n_r() - 1;
  if (s >= last) {
    const double w = std::clamp((rho - grid_.r(last)) / (0.5 * grid_.dr()), 0.0, 1.0);
    return (1.0 - w) * ring_value(last, t) + w * boundary_value(t);
  }
  const int m0 = static_cast<int>(std::floor(s));
  const double w = s - m0;
  return (1.0 - w) * ring_value(m0, t) + w * ring_value(m0 + 1, t);
}

Vec2 GridSampler::gradient(Complex x, double h) const {
  const GridSampler& f = *this;
  return {(f(x + Complex(h, 0.0)) - f(x - Complex(h, 0.0))) / (2.0 * h),
          (f(x + Complex(0.0, h)) - f(x - Complex(0.0, h))) / (2.0 * h)};
}

double default_fit_radius(const NodalPartition& partition, Complex p) {
  double d = 1.0 - std::abs(p);
  for (const auto& mp : partition.multiple_points) {
    const double e = std::abs(mp.location - p);
    if (e > 0.0) d = std::min(d, e);
  }
  return 0.9 * d;
}

ExponentFit local_exponent_fit(const std::function<double(Complex)>& U, Complex p, int mult, const FitOptions& opt) {
  ExponentFit fit;
  fit.order = mult;
  const int n = std::max(16, opt.samples);
  std::vector<std::vector<double>> rings;
  for (int i = 0; i < 3; ++i) {
    const double r = opt.radius / static_cast<double>(1 << i);
    std::vector<double> vals(static_cast<std::size_t>(n));
    double mean = 0.0;
    for (int q = 0; q < n; ++q) {
      const double phi = kTwoPi * q / n;
      vals[static_cast<std::size_t>(q)] = U(p + std::polar(r, phi));
      mean += vals[static_cast<std::size_t>(q)];
    }
    mean /= n;
    fit.radii.push_back(r);
    fit.means.push_back(mean);
    rings.push_back(std::move(vals));
  }
  for (double m : fit.means) {
    if (!(m > 0.0)) throw Error(ErrorCode::FitFailure, "U vanishes on a fitting circle");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double x = std::log(fit.radii[static_cast<std::size_t>(i)]);
    const double y = std::log(fit.means[static_cast<std::size_t>(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.exponent = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);

  const double half = 0.5 * mult;
  double total = 0.0;
  for (const auto& ring : rings) {
    for (double v : ring) total += v * v;
  }
  auto misfit = [&](double theta0) {
    double err = 0.0;
    for (const auto& ring : rings) {
      double num = 0.0, den = 0.0;
      for (int q = 0; q < n; ++q) {
        const double c = std::abs(std::cos(half * (kTwoPi * q / n + theta0)));
        num += ring[static_cast<std::size_t>(q)] * c;
        den += c * c;
      }
      const double a = den > 0.0 ? num / den : 0.0;
      for (int q = 0; q < n; ++q) {
        const double c = std::abs(std::cos(half * (kTwoPi * q / n + theta0)));
        const double d = ring[static_cast<std::size_t>(q)] - a * c;
        err += d * d;
      }
    }
    return std::sqrt(err / total);
  };
  const double period = kTwoPi / std::max(1, mult);
  const int scan = 720;
  double best = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  for (int i = 0; i < scan; ++i) {
    const double t = period * i / scan;
    const double e = misfit(t);
    if (e < best) {
      best = e;
      best_t = t;
    }
  }
  // Golden-section refinement inside the bracketing scan cells.
  double lo = best_t - period / scan;
  double hi = best_t + period / scan;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = misfit(c);
  double fd = misfit(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = misfit(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = misfit(d);
    }
  }
  const double t = 0.5 * (lo + hi);
  const double ft = misfit(t);
  if (ft < best) {
    best = ft;
    best_t = t;
  }
  fit.phase = std::fmod(std::fmod(best_t, period) + period, period);
  fit.residual = best;
  fit.exponent_ok = std::abs(fit.exponent - half) <= opt.exponent_tol;
  if (fit.residual > opt.max_residual) {
    throw Error(ErrorCode::FitFailure, fmt::format("phase fit residual {:.3f} exceeds {:.3f} (exponent {:.3f})",
                                                   fit.residual, opt.max_residual, fit.exponent));
  }
  return fit;
}

ReflectionReport gradient_reflection_check(const DensityGrid& state, const NodalPartition& p, double offset,
                                           int per_interface) {
  ReflectionReport rep;
  const PolarGrid& g = state.grid;
  const DensityGrid proj = state.projected();
  std::vector<GridSampler> samplers;
  for (int i = 0; i < state.k; ++i) {
    std::vector<double> b(static_cast<std::size_t>(g.n_theta()));
    for (int l = 0; l < g.n_theta(); ++l) b[static_cast<std::size_t>(l)] = proj.bnd(l, i);
    samplers.emplace_back(g, proj.field(i), std::move(b));
  }
  const GridSampler U(g, p.U, p.U_boundary);

  std::vector<double> mismatches;
  std::vector<double> angles;
  rep.min_grad_norm = std::numeric_limits<double>::infinity();
  for (const auto& itf : p.interfaces) {
    if (itf.region_a >= state.k || itf.region_b >= state.k) continue;
    std::vector<std::size_t> usable;
    for (std::size_t e = 0; e < itf.edges.size(); ++e) {
      const auto [a, b] = itf.edges[e];
      const Complex q = 0.5 * (centre(g, a) + centre(g, b));
      const double delta = offset * g.cell_size(ring_of(g, a));
      bool ok = std::abs(q) + 3.0 * delta < 1.0 - g.dr() && std::abs(q) > 3.0 * delta;
      for (const auto& mp : p.multiple_points) {
        ok = ok && std::abs(q - mp.location) > 8.0 * local_size(g, std::abs(mp.location)) + 3.0 * delta;
      }
      // Both stencils must stay in their own region with every other species
      // below the threshold, i.e. away from the overlap zone of a junction.
      const Complex nrm = (centre(g, b) - centre(g, a)) / std::abs(centre(g, b) - centre(g, a));
      for (int t = -2; t <= 2 && ok; ++t) {
        const std::size_t c = cell_at(g, q + static_cast<double>(t) * delta * nrm);
        if (t < 0) ok = p.filled[c] == itf.region_a;
        if (t > 0) ok = p.filled[c] == itf.region_b;
        for (int i = 0; i < state.k && ok; ++i) {
          if (i != itf.region_a && i != itf.region_b) ok = state.at(c, i) <= p.threshold;
        }
      }
      if (ok) usable.push_back(e);
    }
    if (usable.empty()) continue;
    const std::size_t step = std::max<std::size_t>(1, usable.size() / static_cast<std::size_t>(per_interface));
    for (std::size_t idx = step / 2; idx < usable.size(); idx += step) {
      const auto [a, b] = itf.edges[usable[idx]];
      const Complex xa = centre(g, a);
      const Complex xb = centre(g, b);
      const Complex q = 0.5 * (xa + xb);
      const Complex nrm = (xb - xa) / std::abs(xb - xa);
      const double delta = offset * g.cell_size(ring_of(g, a));
      const double h = 0.5 * g.cell_size(ring_of(g, a));
      // Linear extrapolation from offsets delta and 2 delta back to q.
      const auto& sa = samplers[static_cast<std::size_t>(itf.region_a)];
      const auto& sb = samplers[static_cast<std::size_t>(itf.region_b)];
      const Vec2 ga1 = sa.gradient(q - delta * nrm, h);
      const Vec2 ga2 = sa.gradient(q - 2.0 * delta * nrm, h);
      const Vec2 gb1 = sb.gradient(q + delta * nrm, h);
      const Vec2 gb2 = sb.gradient(q + 2.0 * delta * nrm, h);
      const Vec2 ga{2.0 * ga1.x1 - ga2.x1, 2.0 * ga1.x2 - ga2.x2};
      const Vec2 gb{2.0 * gb1.x1 - gb2.x1, 2.0 * gb1.x2 - gb2.x2};
      const double na = ga.norm();
      const double nb = gb.norm();
      if (na == 0.0 || nb == 0.0) continue;
      ReflectionSample smp;
      smp.point = q;
      smp.region_a = itf.region_a;
      smp.region_b = itf.region_b;
      const double cosang = std::clamp((ga.x1 * gb.x1 + ga.x2 * gb.x2) / (na * nb), -1.0, 1.0);
      smp.angle = std::acos(cosang);
      smp.mismatch = std::abs(na - nb) / std::max(na, nb);
      smp.grad_norm = 0.5 * (na + nb);
      rep.max_angle_error = std::max(rep.max_angle_error, kPi - smp.angle);
      rep.max_mismatch = std::max(rep.max_mismatch, smp.mismatch);
      rep.min_grad_norm = std::min(rep.min_grad_norm, smp.grad_norm);
      mismatches.push_back(smp.mismatch);
      angles.push_back(kPi - smp.angle);
      rep.samples.push_back(smp);
    }
  }
  if (!mismatches.empty()) {
    std::sort(mismatches.begin(), mismatches.end());
    rep.median_mismatch = mismatches[mismatches.size() / 2];
    std::sort(angles.begin(), angles.end());
    rep.median_angle_error = angles[angles.size() / 2];
  } else {
    rep.min_grad_norm = 0.0;
  }
  for (const auto& mp : p.multiple_points) {
    const double r = 8.0 * local_size(g, std::abs(mp.location));
    double outer = 0.0, inner = 0.0;
    const int n = 64;
    for (int q = 0; q < n; ++q) {
      const Complex dir = std::polar(1.0, kTwoPi * q / n);
      outer += U.gradient(mp.location + r * dir, 0.25 * r).norm();
      inner += U.gradient(mp.location + 0.25 * r * dir, 0.0625 * r).norm();
    }
    rep.decay_near_points.emplace_back(outer / n, inner / n);
  }
  return rep;
}

ReconstructionReport reconstruct_alternating(const DensityGrid& state, const NodalPartition& p,
                                             double tolerance_factor) {
  if (state.k % 2 != 0) {
    throw Error(ErrorCode::OddSpeciesCount, "reconstruction needs an even species count, got " + std::to_string(state.k));
  }
  for (const auto& mp : p.multiple_points) {
    if (mp.multiplicity % 2 != 0) {
      throw Error(ErrorCode::OddMultiplicityPresent,
                  fmt::format("interior point ({:.4f}, {:.4f}) has multiplicity {}; U is not |psi_a|",
                              mp.location.real(), mp.location.imag(), mp.multiplicity));
    }
  }
  const PolarGrid& g = state.grid;
  ReconstructionReport rep;
  rep.psi.assign(g.cells(), 0.0);
  rep.psi_boundary.assign(static_cast<std::size_t>(g.n_theta()), 0.0);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    for (int j = 0; j < state.k; ++j) rep.psi[c] += AlternatingDatum::sign(j) * state.at(c, j);
  }
  double amp = 0.0;
  for (int l = 0; l < g.n_theta(); ++l) {
    double v = 0.0;
    for (int j = 0; j < state.k; ++j) v += AlternatingDatum::sign(j) * state.bnd(l, j);
    rep.psi_boundary[static_cast<std::size_t>(l)] = v;
    amp = std::max(amp, std::abs(v));
  }
  const auto scaled = scaled_laplacian(g, rep.psi, rep.psi_boundary);
  const auto raw = discrete_laplacian(g, rep.psi, rep.psi_boundary);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    rep.residual = std::max(rep.residual, std::abs(scaled[c]));
    rep.residual_raw = std::max(rep.residual_raw, std::abs(raw[c]));
    for (const auto& mp : p.multiple_points) {
      if (std::abs(centre(g, c) - mp.location) <= 3.0 * 8.0 * local_size(g, std::abs(mp.location))) {
        rep.residual_near_points = std::max(rep.residual_near_points, std::abs(scaled[c]));
      }
    }
  }
  const auto ref = sample_cells(g, [&](double r, double t) { return amp * r * r * r * std::cos(3.0 * t); });
  std::vector<double> ref_b(static_cast<std::size_t>(g.n_theta()));
  for (int l = 0; l < g.n_theta(); ++l) ref_b[static_cast<std::size_t>(l)] = amp * std::cos(3.0 * g.theta(l));
  for (double v : scaled_laplacian(g, ref, ref_b)) rep.reference = std::max(rep.reference, std::abs(v));
  for (double v : discrete_laplacian(g, ref, ref_b)) rep.reference_raw = std::max(rep.reference_raw, std::abs(v));
  rep.tolerance = tolerance_factor * rep.reference;
  rep.harmonic = rep.residual <= rep.tolerance;
  return rep;
}

}  // namespace segrega
