#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pachner/error.hpp"
#include "pachner/perm4.hpp"
#include "pachner/triangulation.hpp"

namespace pachner {

enum class MoveKind : std::uint8_t { k23 = 0, k32 = 1, k14 = 2, k41 = 3 };

inline constexpr std::array<MoveKind, 4> kAllMoveKinds{MoveKind::k23, MoveKind::k32, MoveKind::k14,
                                                      MoveKind::k41};

constexpr int tet_delta(MoveKind k) {
  switch (k) {
    case MoveKind::k23: return 1;
    case MoveKind::k32: return -1;
    case MoveKind::k14: return 3;
    case MoveKind::k41: return -3;
  }
  return 0;
}

constexpr int vertex_delta(MoveKind k) {
  switch (k) {
    case MoveKind::k14: return 1;
    case MoveKind::k41: return -1;
    default: return 0;
  }
}

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::k23: return "2-3";
    case MoveKind::k32: return "3-2";
    case MoveKind::k14: return "1-4";
    case MoveKind::k41: return "4-1";
  }
  return "?";
}

/// A set of enabled move kinds.
class MoveSet {
 public:
  constexpr MoveSet() = default;
  constexpr MoveSet(std::initializer_list<MoveKind> kinds) {
    for (auto k : kinds) insert(k);
  }

  static constexpr MoveSet bistellar23() { return {MoveKind::k23, MoveKind::k32}; }
  static constexpr MoveSet bistellar14() { return {MoveKind::k14, MoveKind::k41}; }
  static constexpr MoveSet all() { return {MoveKind::k23, MoveKind::k32, MoveKind::k14, MoveKind::k41}; }

  /// Accepts "23", "14", "all", or a comma list of "23,32,14,41".
  static MoveSet parse(std::string_view text) {
    if (text == "23") return bistellar23();
    if (text == "14") return bistellar14();
    if (text == "all") return all();
    MoveSet s;
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = std::min(text.find(',', start), text.size());
      const std::string_view tok = text.substr(start, comma - start);
      if (tok == "23" || tok == "2-3") s.insert(MoveKind::k23);
      else if (tok == "32" || tok == "3-2") s.insert(MoveKind::k32);
      else if (tok == "14" || tok == "1-4") s.insert(MoveKind::k14);
      else if (tok == "41" || tok == "4-1") s.insert(MoveKind::k41);
      else throw Error("unknown move kind '" + std::string(tok) + "'");
      start = comma + 1;
    }
    return s;
  }

  constexpr void insert(MoveKind k) { bits_ |= 1u << static_cast<unsigned>(k); }
  constexpr bool contains(MoveKind k) const { return bits_ & (1u << static_cast<unsigned>(k)); }
  constexpr bool empty() const { return bits_ == 0; }

  // Canonical text form, e.g. "23,32".
  std::string str() const {
    static constexpr const char* names[] = {"23", "32", "14", "41"};
    std::string out;
    for (auto k : kAllMoveKinds)
      if (contains(k)) {
        if (!out.empty()) out += ',';
        out += names[static_cast<int>(k)];
      }
    return out;
  }

  friend constexpr bool operator==(MoveSet, MoveSet) = default;

 private:
  unsigned bits_ = 0;
};

/// Where a move applies: a face (2-3, encoded 4*tet+face), an edge orbit
/// (3-2), a tetrahedron (1-4) or a vertex orbit (4-1).
struct MoveHandle {
  MoveKind kind = MoveKind::k23;
  std::size_t locus = 0;

  friend bool operator==(const MoveHandle&, const MoveHandle&) = default;
};

namespace detail {

// Embedding of a degree-3 edge: the three tetrahedra in cyclic order with the
// edge ends (u, v), the vertex facing back (p) and the vertex facing forward (q).
struct EdgeStar {
  std::array<std::size_t, 3> tet;
  std::array<int, 3> u, v, p, q;
};

inline std::optional<EdgeStar> degree_three_star(const Triangulation& tri, const Skeleton& sk,
                                                 std::size_t orbit) {
  if (orbit >= sk.edge_count()) return std::nullopt;
  if (sk.edge_degree[orbit] != 3 || sk.edge_boundary[orbit] || sk.edge_invalid[orbit]) return std::nullopt;
  std::size_t first = 0;
  while (static_cast<std::size_t>(sk.edge_orbit[first]) != orbit) ++first;
  const std::size_t t0 = first / 6;
  const auto [a, b] = kEdgeVertices[first % 6];
  int others[2], k = 0;
  for (int x = 0; x < 4; ++x)
    if (x != a && x != b) others[k++] = x;

  EdgeStar s;
  std::size_t t = t0;
  int u = a, v = b, p = others[0], q = others[1];
  for (int i = 0; i < 3; ++i) {
    s.tet[i] = t;
    s.u[i] = u;
    s.v[i] = v;
    s.p[i] = p;
    s.q[i] = q;
    const Gluing& g = tri.gluing(t, q);
    if (g.boundary()) return std::nullopt;
    t = g.destination->tet;
    const int nu = g.perm[u], nv = g.perm[v], np = g.perm[q], nq = g.perm[p];
    u = nu;
    v = nv;
    p = np;
    q = nq;
  }
  if (t != t0 || u != s.u[0] || v != s.v[0] || p != s.p[0]) return std::nullopt;
  if (s.tet[0] == s.tet[1] || s.tet[1] == s.tet[2] || s.tet[0] == s.tet[2]) return std::nullopt;
  return s;
}

// Star of a degree-4 vertex: the corner tetrahedron, the vertex label there,
// and for each other face j of that tetrahedron the map from the merged
// tetrahedron's labels to the neighbour's labels.
struct VertexStar {
  std::size_t tet0 = 0;
  int w0 = 0;
  std::array<std::size_t, 4> neighbour{};
  std::array<Perm4, 4> map{};
};

inline std::optional<VertexStar> degree_four_star(const Triangulation& tri, const Skeleton& sk,
                                                  std::size_t orbit) {
  if (orbit >= sk.vertex_count() || sk.vertex_degree[orbit] != 4) return std::nullopt;
  std::size_t first = 0;
  while (static_cast<std::size_t>(sk.vertex_orbit[first]) != orbit) ++first;
  VertexStar s;
  s.tet0 = first / 4;
  s.w0 = static_cast<int>(first % 4);
  std::vector<std::size_t> seen{s.tet0};
  for (int j = 0; j < 4; ++j) {
    if (j == s.w0) continue;
    const Gluing& g = tri.gluing(s.tet0, j);
    if (g.boundary()) return std::nullopt;
    const std::size_t d = g.destination->tet;
    if (std::find(seen.begin(), seen.end(), d) != seen.end()) return std::nullopt;
    seen.push_back(d);
    s.neighbour[j] = d;
    s.map[j] = g.perm * Perm4::swap(s.w0, j);
  }
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) {
      if (j == s.w0 || k == s.w0) continue;
      const Gluing& g = tri.gluing(s.neighbour[j], s.map[j][k]);
      if (g.boundary() || g.destination->tet != s.neighbour[k]) return std::nullopt;
      if (!(g.perm == s.map[k] * Perm4::swap(j, k) * s.map[j].inverse())) return std::nullopt;
    }
  return s;
}

/// Replaces a set of tetrahedra by freshly glued ones.
///
/// Kept tetrahedra are renumbered in order, new ones are appended. Every outer
/// face of the removed region is given a new home (tetrahedron plus a map from
/// the new tetrahedron's labels to the old one's); gluings are rewritten
/// through those maps.
class Retriangulation {
 public:
  Retriangulation(const Triangulation& old, const std::vector<std::size_t>& removed, std::size_t added)
      : old_(old), relocated_(4 * old.size()) {
    std::vector<bool> gone(old.size(), false);
    for (auto t : removed) gone[t] = true;
    std::size_t next = 0;
    for (std::size_t t = 0; t < old.size(); ++t) {
      if (gone[t]) continue;
      for (int f = 0; f < 4; ++f) relocated_[4 * t + f] = Home{next, Perm4::identity()};
      ++next;
    }
    first_new_ = next;
    table_.resize(4 * (next + added));
  }

  std::size_t new_tet(std::size_t i) const { return first_new_ + i; }

  // Old face (tet, face) now lives in new tetrahedron `tet`; `map` sends the
  // new tetrahedron's vertex labels to the old ones.
  void relocate(std::size_t old_tet, int old_face, std::size_t tet, Perm4 map) {
    relocated_[4 * old_tet + old_face] = Home{tet, map};
  }

  void glue_new(std::size_t a, int face, std::size_t b, Perm4 perm) {
    table_[4 * a + face] = Gluing{FaceRef{b, perm[face]}, perm};
    table_[4 * b + perm[face]] = Gluing{FaceRef{a, face}, perm.inverse()};
  }

  Triangulation finish() {
    for (std::size_t t = 0; t < old_.size(); ++t)
      for (int f = 0; f < 4; ++f) {
        const auto& home = relocated_[4 * t + f];
        if (!home) continue;
        const int new_face = home->map.pre_image(f);
        const Gluing& g = old_.gluing(t, f);
        if (g.boundary()) continue;
        const auto& there = relocated_[4 * g.destination->tet + g.destination->face];
        if (!there) throw Error("retriangulation: outer face glued into the removed region");
        const Perm4 perm = there->map.inverse() * g.perm * home->map;
        table_[4 * home->tet + new_face] = Gluing{FaceRef{there->tet, perm[new_face]}, perm};
      }
    return Triangulation::from_table(std::move(table_));
  }

 private:
  struct Home {
    std::size_t tet;
    Perm4 map;
  };
  const Triangulation& old_;
  std::vector<std::optional<Home>> relocated_;
  std::vector<Gluing> table_;
  std::size_t first_new_ = 0;
};

inline bool applicable_23(const Triangulation& tri, std::size_t locus) {
  if (locus >= 4 * tri.size()) return false;
  const Gluing& g = tri.gluing(locus / 4, static_cast<int>(locus % 4));
  if (g.boundary() || g.destination->tet == locus / 4) return false;
  // canonical side: the lower (tet, face) slot
  return 4 * g.destination->tet + g.destination->face > locus;
}

inline Triangulation apply_23(const Triangulation& tri, std::size_t locus) {
  const std::size_t a = locus / 4;
  const int fa = static_cast<int>(locus % 4);
  const Gluing& g = tri.gluing(a, fa);
  const std::size_t b = g.destination->tet;
  const Perm4 p = g.perm;
  std::array<int, 3> rim{};
  for (int x = 0, k = 0; x < 4; ++x)
    if (x != fa) rim[k++] = x;

  Retriangulation r(tri, {a, b}, 3);
  for (int i = 0; i < 3; ++i) {
    const std::size_t c = r.new_tet(i);
    r.relocate(a, rim[i], c, Perm4::identity());
    r.relocate(b, p[rim[i]], c, p * Perm4::swap(fa, rim[i]));
    const int j = (i + 1) % 3;
    r.glue_new(c, rim[j], r.new_tet(j), Perm4::swap(rim[i], rim[j]));
  }
  return r.finish();
}

inline Triangulation apply_32(const Triangulation& tri, const EdgeStar& s) {
  Retriangulation r(tri, {s.tet[0], s.tet[1], s.tet[2]}, 2);
  const std::size_t top = r.new_tet(0), bottom = r.new_tet(1);
  const int u0 = s.u[0], v0 = s.v[0], p0 = s.p[0], q0 = s.q[0];
  // Labels of the three link vertices in each new tetrahedron.
  const std::array<int, 3> top_label{p0, v0, q0};
  const std::array<int, 3> bottom_label{p0, u0, q0};
  r.glue_new(top, u0, bottom, Perm4::swap(u0, v0));
  for (int i = 0; i < 3; ++i) {
    const int prev = (i + 2) % 3, next = (i + 1) % 3;
    std::array<int, 4> im{};
    im[u0] = s.u[i];
    im[top_label[prev]] = s.q[i];
    im[top_label[i]] = s.p[i];
    im[top_label[next]] = s.v[i];
    r.relocate(s.tet[i], s.v[i], top, Perm4(im[0], im[1], im[2], im[3]));
    im[v0] = s.v[i];
    im[bottom_label[prev]] = s.q[i];
    im[bottom_label[i]] = s.p[i];
    im[bottom_label[next]] = s.u[i];
    r.relocate(s.tet[i], s.u[i], bottom, Perm4(im[0], im[1], im[2], im[3]));
  }
  return r.finish();
}

inline Triangulation apply_14(const Triangulation& tri, std::size_t tet) {
  Retriangulation r(tri, {tet}, 4);
  for (int i = 0; i < 4; ++i) {
    r.relocate(tet, i, r.new_tet(i), Perm4::identity());
    for (int j = i + 1; j < 4; ++j) r.glue_new(r.new_tet(i), j, r.new_tet(j), Perm4::swap(i, j));
  }
  return r.finish();
}

inline Triangulation apply_41(const Triangulation& tri, const VertexStar& s) {
  std::vector<std::size_t> removed{s.tet0};
  for (int j = 0; j < 4; ++j)
    if (j != s.w0) removed.push_back(s.neighbour[j]);
  Retriangulation r(tri, removed, 1);
  const std::size_t merged = r.new_tet(0);
  r.relocate(s.tet0, s.w0, merged, Perm4::identity());
  for (int j = 0; j < 4; ++j)
    if (j != s.w0) r.relocate(s.neighbour[j], s.map[j][j], merged, s.map[j]);
  return r.finish();
}

}  // namespace detail

/// Lists every applicable move of the enabled kinds, in the order 2-3, 3-2,
/// 1-4, 4-1 and by ascending locus within a kind.
inline std::vector<MoveHandle> enumerate_moves(const Triangulation& tri, const Skeleton& sk, MoveSet kinds) {
  std::vector<MoveHandle> out;
  if (kinds.contains(MoveKind::k23))
    for (std::size_t slot = 0; slot < 4 * tri.size(); ++slot)
      if (detail::applicable_23(tri, slot)) out.push_back({MoveKind::k23, slot});
  if (kinds.contains(MoveKind::k32))
    for (std::size_t e = 0; e < sk.edge_count(); ++e)
      if (sk.edge_degree[e] == 3 && detail::degree_three_star(tri, sk, e)) out.push_back({MoveKind::k32, e});
  if (kinds.contains(MoveKind::k14))
    for (std::size_t t = 0; t < tri.size(); ++t) out.push_back({MoveKind::k14, t});
  if (kinds.contains(MoveKind::k41))
    for (std::size_t v = 0; v < sk.vertex_count(); ++v)
      if (sk.vertex_degree[v] == 4 && detail::degree_four_star(tri, sk, v)) out.push_back({MoveKind::k41, v});
  return out;
}

inline std::vector<MoveHandle> enumerate_moves(const Triangulation& tri, MoveSet kinds) {
  return enumerate_moves(tri, compute_skeleton(tri), kinds);
}

/// Performs one move, returning a new triangulation.  `sk` must be the
/// skeleton of `tri`.
inline Triangulation apply_move(const Triangulation& tri, const Skeleton& sk, MoveHandle h) {
  auto fail = [&]() -> Error {
    return Error(std::string("move ") + to_string(h.kind) + " is not applicable at locus " +
                 std::to_string(h.locus));
  };
  switch (h.kind) {
    case MoveKind::k23:
      if (!detail::applicable_23(tri, h.locus)) throw fail();
      return detail::apply_23(tri, h.locus);
    case MoveKind::k32: {
      auto star = detail::degree_three_star(tri, sk, h.locus);
      if (!star) throw fail();
      return detail::apply_32(tri, *star);
    }
    case MoveKind::k14:
      if (h.locus >= tri.size()) throw fail();
      return detail::apply_14(tri, h.locus);
    case MoveKind::k41: {
      auto star = detail::degree_four_star(tri, sk, h.locus);
      if (!star) throw fail();
      return detail::apply_41(tri, *star);
    }
  }
  throw fail();
}

inline Triangulation apply_move(const Triangulation& tri, MoveHandle h) {
  return apply_move(tri, compute_skeleton(tri), h);
}

}  // namespace pachner
