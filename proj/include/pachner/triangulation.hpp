#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pachner/error.hpp"
#include "pachner/perm4.hpp"

namespace pachner {

/// Face `face` of tetrahedron `tet`; face i is the one opposite vertex i.
struct FaceRef {
  std::size_t tet = 0;
  int face = 0;

  friend bool operator==(const FaceRef&, const FaceRef&) = default;
};

/// One side of a face identification.  `perm` carries the vertices of the
/// source tetrahedron onto the vertices of `destination`'s tetrahedron, so
/// perm[source face] == destination->face.
struct Gluing {
  std::optional<FaceRef> destination;
  Perm4 perm;

  bool boundary() const { return !destination.has_value(); }
  friend bool operator==(const Gluing&, const Gluing&) = default;
};

// Local edge enumeration: the six vertex pairs in lexicographic order.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_number(int a, int b) {
  if (a > b) std::swap(a, b);
  constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[a][b];
}

/// A generalised triangulation: N tetrahedra and a dense table of 4N gluings.
///
/// Values are built with join() and treated as immutable afterwards; moves
/// produce fresh triangulations.
class Triangulation {
 public:
  Triangulation() = default;
  explicit Triangulation(std::size_t tets) : gluings_(4 * tets) {}

  /// Wraps a raw table without checking it (see validate()).
  static Triangulation from_table(std::vector<Gluing> table) {
    if (table.size() % 4 != 0) throw Error("gluing table size must be a multiple of 4");
    Triangulation t;
    t.gluings_ = std::move(table);
    return t;
  }

  std::size_t size() const { return gluings_.size() / 4; }

  const Gluing& gluing(std::size_t tet, int face) const { return gluings_[4 * tet + face]; }
  const Gluing& gluing(FaceRef f) const { return gluing(f.tet, f.face); }
  const std::vector<Gluing>& table() const { return gluings_; }

  bool is_boundary(std::size_t tet, int face) const { return gluing(tet, face).boundary(); }

  // Tetrahedron across the given face, if any.
  std::optional<std::size_t> adjacent_tet(std::size_t tet, int face) const {
    const auto& g = gluing(tet, face);
    if (g.boundary()) return std::nullopt;
    return g.destination->tet;
  }

  bool closed() const {
    for (const auto& g : gluings_)
      if (g.boundary()) return false;
    return true;
  }

  std::size_t add_tetrahedra(std::size_t count) {
    const std::size_t first = size();
    gluings_.resize(gluings_.size() + 4 * count);
    return first;
  }

  /// Glues face `face` of `tet` to the face perm[face] of `dest`, updating
  /// both sides.
  void join(std::size_t tet, int face, std::size_t dest, Perm4 perm) {
    if (tet >= size() || dest >= size()) throw Error("join: tetrahedron index out of range");
    const int dest_face = perm[face];
    if (tet == dest && dest_face == face) throw Error("join: a face cannot be glued to itself");
    if (!is_boundary(tet, face) || !is_boundary(dest, dest_face))
      throw Error("join: face is already glued");
    gluings_[4 * tet + face] = Gluing{FaceRef{dest, dest_face}, perm};
    gluings_[4 * dest + dest_face] = Gluing{FaceRef{tet, face}, perm.inverse()};
  }

  void unjoin(std::size_t tet, int face) {
    const auto& g = gluing(tet, face);
    if (g.boundary()) return;
    const FaceRef other = *g.destination;
    gluings_[4 * other.tet + other.face] = Gluing{};
    gluings_[4 * tet + face] = Gluing{};
  }

  friend bool operator==(const Triangulation&, const Triangulation&) = default;

 private:
  std::vector<Gluing> gluings_;
};

enum class Violation {
  kNone,
  kEmpty,
  kDestinationOutOfRange,
  kFaceMismatch,
  kSelfGluedFace,
  kInvolution,
};

inline const char* to_string(Violation v) {
  switch (v) {
    case Violation::kNone: return "ok";
    case Violation::kEmpty: return "empty";
    case Violation::kDestinationOutOfRange: return "destination-out-of-range";
    case Violation::kFaceMismatch: return "face-mismatch";
    case Violation::kSelfGluedFace: return "self-glued-face";
    case Violation::kInvolution: return "involution";
  }
  return "unknown";
}

struct ValidationReport {
  Violation violation = Violation::kNone;
  FaceRef face;

  bool ok() const { return violation == Violation::kNone; }
  explicit operator bool() const { return ok(); }
};

/// Checks every structural invariant of the gluing table and reports the
/// first failure in (tet, face) order.
inline ValidationReport validate(const Triangulation& tri) {
  if (tri.size() == 0) return {Violation::kEmpty, {}};
  for (std::size_t t = 0; t < tri.size(); ++t) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.gluing(t, f);
      if (g.boundary()) continue;
      const FaceRef here{t, f};
      const FaceRef there = *g.destination;
      if (there.tet >= tri.size() || there.face < 0 || there.face > 3)
        return {Violation::kDestinationOutOfRange, here};
      if (g.perm[f] != there.face) return {Violation::kFaceMismatch, here};
      if (there == here) return {Violation::kSelfGluedFace, here};
      const Gluing& back = tri.gluing(there);
      if (back.boundary() || !(*back.destination == here) || !(back.perm == g.perm.inverse()))
        return {Violation::kInvolution, here};
    }
  }
  return {};
}

/// Vertex and edge classes of a triangulation.
///
/// Orbit ids are assigned in order of first appearance when scanning
/// (tet, vertex) / (tet, edge) pairs by index, so they are reproducible.
struct Skeleton {
  std::vector<int> vertex_orbit;        // size 4N, indexed 4*tet + vertex
  std::vector<int> edge_orbit;          // size 6N, indexed 6*tet + edge
  std::vector<int> vertex_degree;       // corners per vertex orbit
  std::vector<int> edge_degree;         // (tet, edge) incidences per edge orbit
  std::vector<bool> edge_boundary;      // true if the edge touches a boundary face
  std::vector<bool> edge_invalid;       // edge identified with itself in reverse

  std::size_t vertex_count() const { return vertex_degree.size(); }
  std::size_t edge_count() const { return edge_degree.size(); }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;  // the smaller index stays the root
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::vector<int> number_classes(detail::UnionFind& uf, std::size_t n,
                                       std::vector<int>& sizes) {
  std::vector<int> root_id(n, -1), ids(n);
  sizes.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = uf.find(i);
    if (root_id[r] < 0) {
      root_id[r] = static_cast<int>(sizes.size());
      sizes.push_back(0);
    }
    ids[i] = root_id[r];
    ++sizes[root_id[r]];
  }
  return ids;
}

}  // namespace detail

inline Skeleton compute_skeleton(const Triangulation& tri) {
  const std::size_t n = tri.size();
  detail::UnionFind vuf(4 * n), euf(6 * n);
  // Edge orientation parity relative to the class root, for invalid-edge detection.
  std::vector<std::vector<std::pair<std::size_t, bool>>> edge_links(6 * n);

  for (std::size_t t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.gluing(t, f);
      if (g.boundary()) continue;
      const std::size_t d = g.destination->tet;
      for (int v = 0; v < 4; ++v)
        if (v != f) vuf.unite(4 * t + v, 4 * d + g.perm[v]);
      for (int e = 0; e < 6; ++e) {
        const auto [a, b] = kEdgeVertices[e];
        if (a == f || b == f) continue;
        const int ia = g.perm[a], ib = g.perm[b];
        const std::size_t x = 6 * t + e, y = 6 * d + edge_number(ia, ib);
        euf.unite(x, y);
        const bool flipped = ia > ib;
        edge_links[x].push_back({y, flipped});
      }
    }
  }

  Skeleton sk;
  sk.vertex_orbit = detail::number_classes(vuf, 4 * n, sk.vertex_degree);
  sk.edge_orbit = detail::number_classes(euf, 6 * n, sk.edge_degree);
  sk.edge_boundary.assign(sk.edge_degree.size(), false);
  sk.edge_invalid.assign(sk.edge_degree.size(), false);

  for (std::size_t t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      if (!tri.is_boundary(t, f)) continue;
      for (int e = 0; e < 6; ++e) {
        const auto [a, b] = kEdgeVertices[e];
        if (a != f && b != f) sk.edge_boundary[sk.edge_orbit[6 * t + e]] = true;
      }
    }

  // Two-colour each edge class by orientation; a conflict means the edge is
  // glued to itself with its ends swapped.
  std::vector<int> orient(6 * n, -1);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < 6 * n; ++s) {
    if (orient[s] >= 0) continue;
    orient[s] = 0;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (auto [y, flipped] : edge_links[x]) {
        const int want = orient[x] ^ static_cast<int>(flipped);
        if (orient[y] < 0) {
          orient[y] = want;
          stack.push_back(y);
        } else if (orient[y] != want) {
          sk.edge_invalid[sk.edge_orbit[x]] = true;
        }
      }
    }
  }
  return sk;
}

inline std::size_t vertex_count(const Triangulation& tri) {
  return compute_skeleton(tri).vertex_count();
}

inline int edge_degree(const Skeleton& sk, std::size_t orbit) {
  if (orbit >= sk.edge_degree.size())
    throw Error("edge_degree: unknown edge orbit " + std::to_string(orbit));
  return sk.edge_degree[orbit];
}

inline int edge_degree(const Triangulation& tri, std::size_t orbit) {
  return edge_degree(compute_skeleton(tri), orbit);
}

/// True if every tetrahedron can be reached from tetrahedron 0 through gluings.
inline bool is_connected(const Triangulation& tri) {
  const std::size_t n = tri.size();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t t = stack.back();
    stack.pop_back();
    for (int f = 0; f < 4; ++f)
      if (auto d = tri.adjacent_tet(t, f); d && !seen[*d]) {
        seen[*d] = true;
        ++count;
        stack.push_back(*d);
      }
  }
  return count == n;
}

}  // namespace pachner
