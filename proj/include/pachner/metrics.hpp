#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pachner/error.hpp"
#include "pachner/graph.hpp"

namespace pachner {

/// Plain adjacency-list view used by all metrics.  Neighbour lists are sorted
/// and free of duplicates and self-loops.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) : adj_(n) {}

  static SimpleGraph from_edges(std::size_t n, const std::vector<Edge>& edges) {
    SimpleGraph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    g.finalize();
    return g;
  }

  static SimpleGraph from(const PachnerGraph& pg) { return from_edges(pg.node_count(), pg.edges); }

  void add_edge(std::uint32_t u, std::uint32_t v) {
    if (u >= adj_.size() || v >= adj_.size()) throw Error("SimpleGraph: edge endpoint out of range");
    if (u == v) return;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }

  void finalize() {
    m_ = 0;
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      m_ += a.size();
    }
    m_ /= 2;
  }

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return m_; }
  const std::vector<std::uint32_t>& neighbours(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }

  bool has_edge(std::uint32_t u, std::uint32_t v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (std::uint32_t u = 0; u < adj_.size(); ++u)
      for (std::uint32_t v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

 private:
  std::vector<std::vector<std::uint32_t>> adj_;
  std::size_t m_ = 0;
};

namespace detail {

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// BFS distances from `src`; stops expanding past `max_depth`.
inline void bfs(const SimpleGraph& g, std::uint32_t src, std::vector<std::uint32_t>& dist,
                std::vector<std::uint32_t>& order, std::uint32_t max_depth = kUnreached) {
  dist.assign(g.node_count(), kUnreached);
  order.clear();
  dist[src] = 0;
  order.push_back(src);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t x = order[head];
    if (dist[x] >= max_depth) continue;
    for (std::uint32_t y : g.neighbours(x))
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        order.push_back(y);
      }
  }
}

}  // namespace detail

inline bool is_connected(const SimpleGraph& g) {
  if (g.node_count() == 0) return true;
  std::vector<std::uint32_t> dist, order;
  detail::bfs(g, 0, dist, order);
  return order.size() == g.node_count();
}

inline double density(const SimpleGraph& g) {
  const double n = static_cast<double>(g.node_count());
  if (n < 2) return 0.0;
  return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1));
}

/// Global transitivity: 3 * triangles / connected triples.
inline double triangle_clustering(const SimpleGraph& g) {
  std::uint64_t closed = 0, triples = 0;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    const auto& nb = g.neighbours(v);
    const std::uint64_t d = nb.size();
    triples += d * (d - (d > 0 ? 1 : 0)) / 2;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (g.has_edge(nb[i], nb[j])) ++closed;  // each triangle counted once per corner
  }
  return triples == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triples);
}

/// Per-node square clustering (Lind et al. form, as in networkx), one value per node.
inline std::vector<double> square_clustering_nodes(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& nb = g.neighbours(v);
    double squares_total = 0, potential = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const std::uint32_t u = nb[i];
      ++stamp;
      for (std::uint32_t x : g.neighbours(u)) mark[x] = stamp;
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const std::uint32_t w = nb[j];
        std::size_t squares = 0;
        for (std::uint32_t x : g.neighbours(w))
          if (x != v && mark[x] == stamp) ++squares;
        std::size_t degm = squares + 1;
        if (mark[w] == stamp) ++degm;
        squares_total += static_cast<double>(squares);
        potential += static_cast<double>(g.degree(u) - degm) + static_cast<double>(g.degree(w) - degm) +
                     static_cast<double>(squares);
      }
    }
    out[v] = potential > 0 ? squares_total / potential : 0.0;
  }
  return out;
}

inline double square_clustering(const SimpleGraph& g) {
  if (g.node_count() == 0) return 0.0;
  const auto c = square_clustering_nodes(g);
  return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
}

struct WienerIndex {
  std::uint64_t full = 0;
  double normalized = 0.0;
};

inline WienerIndex wiener(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  WienerIndex w;
  if (n < 2) return w;
  std::vector<std::uint32_t> dist, order;
  for (std::uint32_t s = 0; s < n; ++s) {
    detail::bfs(g, s, dist, order);
    if (order.size() != n) throw Error("wiener: graph is disconnected");
    for (std::uint32_t t = s + 1; t < n; ++t) w.full += dist[t];
  }
  w.normalized = static_cast<double>(w.full) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
  return w;
}

struct Centrality {
  std::vector<double> scores;
  std::size_t argmax = 0;
  double range = 0.0;
  std::size_t iterations = 0;
};

/// Eigenvector centrality by power iteration on A + I from the all-ones
/// vector.  The shift keeps the iteration convergent on bipartite graphs and
/// does not change the Perron eigenvector.
inline Centrality eigenvector_centrality(const SimpleGraph& g, double tol = 1e-10,
                                         std::size_t max_iter = 1'000'000) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error("eigenvector_centrality: empty graph");
  if (!is_connected(g)) throw Error("eigenvector_centrality: graph is disconnected");
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), next(n);
  double residual = 0, previous = 0;
  Centrality c;
  for (c.iterations = 1; c.iterations <= max_iter; ++c.iterations) {
    for (std::size_t v = 0; v < n; ++v) {
      double s = x[v];
      for (std::uint32_t u : g.neighbours(v)) s += x[u];
      next[v] = s;
    }
    double norm = 0;
    for (double s : next) norm += s * s;
    norm = std::sqrt(norm);
    residual = 0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= norm;
      residual = std::max(residual, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    // Stop once the estimated distance to the fixed point, not just the last
    // step, is below tol; the step ratio estimates the convergence rate.
    const double rate = previous > 0 ? residual / previous : 1.0;
    previous = residual;
    if (residual < tol && (rate < 1.0 ? residual * rate / (1.0 - rate) : residual) < tol) break;
  }
  if (c.iterations > max_iter) throw ConvergenceError("eigenvector_centrality: power iteration did not converge", residual);
  c.scores = std::move(x);
  const auto [lo, hi] = std::minmax_element(c.scores.begin(), c.scores.end());
  c.range = *hi - *lo;
  c.argmax = static_cast<std::size_t>(std::max_element(c.scores.begin(), c.scores.end()) - c.scores.begin());
  return c;
}

/// (length, frequency) pairs in increasing length order.
using CycleHistogram = std::vector<std::pair<std::size_t, std::size_t>>;

namespace detail {

// Dense GF(2) vectors with incremental Gaussian elimination.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t bits) : words_((bits + 63) / 64) {}

  std::size_t rank() const { return rows_.size(); }

  // Inserts v if independent of the current basis.
  bool insert(std::vector<std::uint64_t> v) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t p = pivots_[r];
      if ((v[p / 64] >> (p % 64)) & 1U)
        for (std::size_t w = p / 64; w < words_; ++w) v[w] ^= rows_[r][w];
    }
    for (std::size_t w = 0; w < words_; ++w) {
      if (v[w] == 0) continue;
      const std::size_t p = 64 * w + static_cast<std::size_t>(std::countr_zero(v[w]));
      // Keep rows reduced at the new pivot so later reductions need a single pass.
      for (auto& row : rows_)
        if ((row[p / 64] >> (p % 64)) & 1U)
          for (std::size_t k = 0; k < words_; ++k) row[k] ^= v[k];
      rows_.push_back(std::move(v));
      pivots_.push_back(p);
      return true;
    }
    return false;
  }

  std::size_t words() const { return words_; }

 private:
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace detail

/// Length histogram of a minimum cycle basis (unit weights).
///
/// Candidates are the Horton cycles P(r,x) + xy + P(y,r) built from a BFS tree
/// at every root r, taken in increasing length and kept greedily when
/// independent over GF(2).  Works per connected component.
inline CycleHistogram minimum_cycle_basis(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  const std::vector<Edge> edges = g.edges();
  // Component count via a spanning forest; non-tree edges index the coordinates.
  std::vector<std::uint32_t> comp(n, detail::kUnreached);
  std::vector<std::uint8_t> tree_edge(edges.size(), 0);
  std::unordered_map<std::uint64_t, std::size_t> edge_id;
  edge_id.reserve(edges.size() * 2);
  for (std::size_t i = 0; i < edges.size(); ++i) edge_id.emplace(detail::edge_key(edges[i].first, edges[i].second), i);

  std::size_t components = 0;
  {
    std::vector<std::uint32_t> stack;
    for (std::uint32_t s = 0; s < n; ++s) {
      if (comp[s] != detail::kUnreached) continue;
      comp[s] = static_cast<std::uint32_t>(components++);
      stack.push_back(s);
      while (!stack.empty()) {
        const std::uint32_t x = stack.back();
        stack.pop_back();
        for (std::uint32_t y : g.neighbours(x))
          if (comp[y] == detail::kUnreached) {
            comp[y] = comp[x];
            tree_edge[edge_id.at(detail::edge_key(x, y))] = 1;
            stack.push_back(y);
          }
      }
    }
  }
  const std::size_t target = edges.size() + components - n;
  CycleHistogram hist;
  if (target == 0) return hist;

  std::vector<std::size_t> coord(edges.size(), detail::kUnreached);
  std::size_t dims = 0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (!tree_edge[i]) coord[i] = dims++;

  detail::Gf2Basis basis(dims);
  std::vector<std::uint32_t> dist, order, parent(n), branch(n);
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> cycle_edges;

  auto trace = [&](std::uint32_t v, std::uint32_t root) {
    while (v != root) {
      cycle_edges.push_back(edge_id.at(detail::edge_key(v, parent[v])));
      v = parent[v];
    }
  };

  for (std::size_t len = 3; basis.rank() < target; ++len) {
    if (len > 2 * n + 1) throw Error("minimum_cycle_basis: failed to reach full rank");
    std::size_t found = 0;
    const auto radius = static_cast<std::uint32_t>(len / 2);
    for (std::uint32_t r = 0; r < n && basis.rank() < target; ++r) {
      detail::bfs(g, r, dist, order, radius);
      for (std::uint32_t x : order) {
        if (x == r) {
          branch[x] = r;
          continue;
        }
        // Parent: the smallest neighbour one level closer, matching a fixed BFS tree.
        for (std::uint32_t y : g.neighbours(x))
          if (dist[y] != detail::kUnreached && dist[y] + 1 == dist[x]) {
            parent[x] = y;
            break;
          }
        branch[x] = parent[x] == r ? x : branch[parent[x]];
      }
      for (std::uint32_t x : order) {
        for (std::uint32_t y : g.neighbours(x)) {
          if (y < x || dist[y] == detail::kUnreached) continue;
          if (dist[x] + dist[y] + 1 != len) continue;
          if (x == r || y == r || branch[x] == branch[y]) continue;
          cycle_edges.clear();
          cycle_edges.push_back(edge_id.at(detail::edge_key(x, y)));
          trace(x, r);
          trace(y, r);
          std::sort(cycle_edges.begin(), cycle_edges.end());
          std::string key(reinterpret_cast<const char*>(cycle_edges.data()), cycle_edges.size() * sizeof(std::size_t));
          if (!seen.insert(std::move(key)).second) continue;
          std::vector<std::uint64_t> v(basis.words(), 0);
          for (std::size_t e : cycle_edges)
            if (coord[e] != detail::kUnreached) v[coord[e] / 64] ^= std::uint64_t{1} << (coord[e] % 64);
          if (basis.insert(std::move(v))) {
            ++found;
            if (basis.rank() == target) break;
          }
        }
        if (basis.rank() == target) break;
      }
    }
    seen.clear();
    if (found > 0) hist.emplace_back(len, found);
  }
  return hist;
}

struct TetraStats {
  std::size_t min_tet_index = 0;
  int min_tet_count = 0;
  double avg_tet_count = 0.0;
  std::vector<std::map<int, std::size_t>> per_depth;  // depth -> (tet count -> nodes)
};

inline TetraStats tetra_stats(const PachnerGraph& g) {
  TetraStats s;
  if (g.node_count() == 0) return s;
  s.min_tet_count = g.attrs[0].tet_count;
  double total = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& a = g.attrs[i];
    if (a.tet_count < s.min_tet_count) {
      s.min_tet_count = a.tet_count;
      s.min_tet_index = i;
    }
    total += a.tet_count;
    if (static_cast<std::size_t>(a.depth) >= s.per_depth.size()) s.per_depth.resize(a.depth + 1);
    ++s.per_depth[a.depth][a.tet_count];
  }
  s.avg_tet_count = total / static_cast<double>(g.node_count());
  return s;
}

using DegreeHistogram = std::map<std::size_t, double>;

inline DegreeHistogram degree_histogram(const SimpleGraph& g) {
  DegreeHistogram h;
  for (std::size_t v = 0; v < g.node_count(); ++v) h[g.degree(v)] += 1.0;
  return h;
}

inline DegreeHistogram mean_degree_distribution(const std::vector<DegreeHistogram>& hists) {
  if (hists.empty()) throw Error("mean_degree_distribution: no histograms");
  DegreeHistogram out;
  for (const auto& h : hists)
    for (auto [d, f] : h) out[d] += f;
  for (auto& [d, f] : out) f /= static_cast<double>(hists.size());
  return out;
}

/// Two-colouring by tetrahedron-count parity is proper.
inline bool parity_bipartite(const PachnerGraph& g) {
  for (auto [u, v] : g.edges)
    if ((g.attrs[u].tet_count - g.attrs[v].tet_count) % 2 == 0) return false;
  return true;
}

struct MetricsReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double density = 0.0;
  double triangle_clustering = 0.0;
  double square_clustering = 0.0;
  std::uint64_t wiener_full = 0;
  double wiener_normalized = 0.0;
  std::size_t centrality_argmax = 0;
  double centrality_range = 0.0;
  CycleHistogram cycle_basis;
  std::size_t min_tet_index = 0;
  int min_tet_count = 0;
  double avg_tet_count = 0.0;
  DegreeHistogram degree_histogram;
};

struct MetricsOptions {
  bool wiener = true;
  bool centrality = true;
  bool cycle_basis = true;
};

inline MetricsReport analyze(const PachnerGraph& pg, const MetricsOptions& opt = {}) {
  const SimpleGraph g = SimpleGraph::from(pg);
  MetricsReport r;
  r.node_count = g.node_count();
  r.edge_count = g.edge_count();
  r.density = density(g);
  r.triangle_clustering = triangle_clustering(g);
  r.square_clustering = square_clustering(g);
  if (opt.wiener) {
    const auto w = wiener(g);
    r.wiener_full = w.full;
    r.wiener_normalized = w.normalized;
  }
  if (opt.centrality) {
    const auto c = eigenvector_centrality(g);
    r.centrality_argmax = c.argmax;
    r.centrality_range = c.range;
  }
  if (opt.cycle_basis) r.cycle_basis = minimum_cycle_basis(g);
  const auto t = tetra_stats(pg);
  r.min_tet_index = t.min_tet_index;
  r.min_tet_count = t.min_tet_count;
  r.avg_tet_count = t.avg_tet_count;
  r.degree_histogram = degree_histogram(g);
  return r;
}

struct CorrelationRow {
  std::string seed;
  double invariant = 0.0;
  double size = 0.0;
};

struct EnvelopeFit {
  std::vector<CorrelationRow> rows;
  std::vector<std::pair<double, double>> envelope;  // (invariant, min size) per non-empty bin
  double slope = 0.0;
  double intercept = 0.0;  // natural log
  double bound_c = 75.0;
  double coverage = 0.0;   // fraction of rows with size >= c / sqrt(invariant)
};

/// Joins sizes and invariants by seed and fits a line to the log-log lower
/// envelope: the invariant axis is cut into `bins` log-spaced bins and the
/// smallest size in each bin (at its own invariant value) is kept.
inline EnvelopeFit invariant_correlation(const std::vector<std::pair<std::string, double>>& sizes,
                                         const std::vector<std::pair<std::string, double>>& invariants,
                                         std::size_t bins = 20, double bound_c = 75.0) {
  if (bins == 0) throw Error("invariant_correlation: bin count must be positive");
  std::unordered_map<std::string, double> inv(invariants.begin(), invariants.end());
  EnvelopeFit fit;
  fit.bound_c = bound_c;
  for (const auto& [seed, size] : sizes)
    if (auto it = inv.find(seed); it != inv.end()) fit.rows.push_back({seed, it->second, size});

  std::vector<const CorrelationRow*> usable;
  for (const auto& r : fit.rows)
    if (r.invariant > 0 && r.size > 0) usable.push_back(&r);
  if (usable.empty()) throw Error("invariant_correlation: no positive rows to fit");

  double lo = usable.front()->invariant, hi = lo;
  for (auto* r : usable) {
    lo = std::min(lo, r->invariant);
    hi = std::max(hi, r->invariant);
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  const double width = (lhi - llo) / static_cast<double>(bins);
  std::vector<const CorrelationRow*> best(bins, nullptr);
  for (auto* r : usable) {
    std::size_t b = width > 0 ? static_cast<std::size_t>((std::log(r->invariant) - llo) / width) : 0;
    b = std::min(b, bins - 1);
    if (!best[b] || r->size < best[b]->size) best[b] = r;
  }
  for (auto* r : best)
    if (r) fit.envelope.emplace_back(r->invariant, r->size);
  if (fit.envelope.size() < 3) throw Error("invariant_correlation: fewer than 3 non-empty bins");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(fit.envelope.size());
  for (auto [x, y] : fit.envelope) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom <= 0) throw Error("invariant_correlation: degenerate invariant range");
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;

  std::size_t covered = 0;
  for (auto* r : usable)
    if (r->size >= bound_c / std::sqrt(r->invariant)) ++covered;
  fit.coverage = static_cast<double>(covered) / static_cast<double>(usable.size());
  return fit;
}

}  // namespace pachner
