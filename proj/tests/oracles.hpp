#pragma once

// Slow, obviously-correct reference implementations used to check the
// library.  Nothing here shares code with include/pachner beyond the graph
// container types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "pachner/metrics.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<int>>;

inline Matrix adjacency(const pachner::SimpleGraph& g) {
  const std::size_t n = g.node_count();
  Matrix a(n, std::vector<int>(n, 0));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  return a;
}

/// Random connected graph: random tree plus `extra` random non-edges.
inline pachner::SimpleGraph random_connected(std::mt19937_64& rng, std::size_t n, std::size_t extra) {
  pachner::SimpleGraph g(n);
  std::set<std::pair<std::uint32_t, std::uint32_t>> have;
  for (std::uint32_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
    g.add_edge(u, v);
    have.insert({u, v});
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  extra = std::min(extra, max_edges - (n - 1));
  while (extra > 0) {
    auto u = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    auto v = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!have.insert({u, v}).second) continue;
    g.add_edge(u, v);
    --extra;
  }
  g.finalize();
  return g;
}

inline double density(const pachner::SimpleGraph& g) {
  const auto a = adjacency(g);
  const std::size_t n = a.size();
  if (n < 2) return 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m += a[i][j];
  return static_cast<double>(m) / (static_cast<double>(n) * (n - 1) / 2.0);
}

/// Transitivity from explicit triple enumeration.
inline double transitivity(const pachner::SimpleGraph& g) {
  const auto a = adjacency(g);
  const std::size_t n = a.size();
  std::size_t triangles = 0, triples = 0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (i != c && j != c && a[c][i] && a[c][j]) {
          ++triples;
          if (a[i][j]) ++triangles;
        }
  return triples ? static_cast<double>(triangles) / static_cast<double>(triples) : 0.0;
}

/// Square clustering from the adjacency matrix: for each neighbour pair
/// (u, w) of v, q = common neighbours of u and w other than v, and the
/// potential is (k_u - (1 + q + [u~w])) + (k_w - (1 + q + [u~w])) + q.
inline double square_clustering(const pachner::SimpleGraph& g) {
  const auto a = adjacency(g);
  const std::size_t n = a.size();
  if (n == 0) return 0;
  double total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    double sq = 0, pot = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t w = u + 1; w < n; ++w) {
        if (!a[v][u] || !a[v][w]) continue;
        int q = 0, ku = 0, kw = 0;
        for (std::size_t x = 0; x < n; ++x) {
          ku += a[u][x];
          kw += a[w][x];
          if (x != v && a[u][x] && a[w][x]) ++q;
        }
        const int theta = a[u][w];
        sq += q;
        pot += (ku - (1 + q + theta)) + (kw - (1 + q + theta)) + q;
      }
    total += pot > 0 ? sq / pot : 0.0;
  }
  return total / static_cast<double>(n);
}

/// Wiener index from Floyd-Warshall.
inline std::uint64_t wiener(const pachner::SimpleGraph& g) {
  const auto a = adjacency(g);
  const std::size_t n = a.size();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w += static_cast<std::uint64_t>(d[i][j]);
  return w;
}

/// Perron eigenvector of the adjacency matrix from a dense symmetric
/// eigendecomposition, non-negative and of unit Euclidean norm.
inline std::vector<double> perron_vector(const pachner::SimpleGraph& g) {
  const auto a = adjacency(g);
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd v = es.eigenvectors().col(n - 1);  // eigenvalues ascend
  if (v.sum() < 0) v = -v;
  v /= v.norm();
  return {v.data(), v.data() + n};
}

/// Length histogram of a minimum cycle basis: every simple cycle is listed,
/// then cycles are taken shortest first whenever they are independent.
inline pachner::CycleHistogram minimum_cycle_basis(const pachner::SimpleGraph& g) {
  const auto a = adjacency(g);
  const std::size_t n = a.size();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> eid;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i][j]) eid[{i, j}] = eid.size();
  const std::size_t m = eid.size();
  auto id = [&](std::size_t x, std::size_t y) { return eid.at({std::min(x, y), std::max(x, y)}); };

  // Simple cycles: start at their smallest vertex, only visit larger
  // vertices, and keep one of the two directions.
  std::vector<std::vector<std::uint8_t>> cycles;
  std::vector<std::size_t> path;
  std::vector<bool> on(n, false);
  auto dfs = [&](auto&& self, std::size_t s, std::size_t x) -> void {
    for (std::size_t y = s; y < n; ++y) {
      if (!a[x][y]) continue;
      if (y == s && path.size() >= 3 && path[1] < path.back()) {
        std::vector<std::uint8_t> c(m, 0);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) c[id(path[k], path[k + 1])] = 1;
        c[id(path.back(), s)] = 1;
        cycles.push_back(std::move(c));
      } else if (y > s && !on[y]) {
        on[y] = true;
        path.push_back(y);
        self(self, s, y);
        path.pop_back();
        on[y] = false;
      }
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    path = {s};
    on[s] = true;
    dfs(dfs, s, s);
    on[s] = false;
  }
  std::stable_sort(cycles.begin(), cycles.end(), [](const auto& x, const auto& y) {
    return std::count(x.begin(), x.end(), 1) < std::count(y.begin(), y.end(), 1);
  });

  std::vector<std::vector<std::uint8_t>> basis;  // row-echelon over GF(2)
  std::vector<std::size_t> pivot;
  std::map<std::size_t, std::size_t> hist;
  for (const auto& c : cycles) {
    auto v = c;
    for (std::size_t r = 0; r < basis.size(); ++r)
      if (v[pivot[r]])
        for (std::size_t k = 0; k < m; ++k) v[k] ^= basis[r][k];
    const auto it = std::find(v.begin(), v.end(), 1);
    if (it == v.end()) continue;
    pivot.push_back(static_cast<std::size_t>(it - v.begin()));
    basis.push_back(v);
    ++hist[static_cast<std::size_t>(std::count(c.begin(), c.end(), 1))];
  }
  return {hist.begin(), hist.end()};
}

}  // namespace oracle
