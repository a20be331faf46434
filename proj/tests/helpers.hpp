#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pachner/isosig.hpp"
#include "pachner/triangulation.hpp"

namespace testing_helpers {

inline const std::vector<std::string> kManifoldSeeds = {
    "cMcabbgqs", "cMcabbjaj",           "cMcabbgqw",         "eLAkbcbddhhjhk",
    "cMcabbjqw", "gvLQQedfedffrwawrhh", "fvPQcdecedekrsnrs", "jLvAzQQcfeghighiiuquanobwwr"};

inline const std::vector<std::string> kKnotSeeds = {"cMcabbgds",      "cPcbbbadu",        "cPcbbbiht",
                                                    "dLQbcccaekv",    "dLQbcccdero",      "eLPkbcddddcwjb",
                                                    "fLLQcbcdeeedowxxd"};

inline const std::vector<std::string> kSurgerySeeds = {"cMcabbjaj", "cMcabbgag", "gvLQQcdefeffnjndspx",
                                                       "hLLLQkcdefgfgghsdaenjw"};

// Two tetrahedra glued along face 3 by the identity.
inline pachner::Triangulation bipyramid() {
  pachner::Triangulation t(2);
  t.join(0, 3, 1, pachner::Perm4::identity());
  return t;
}

/// Relabels tetrahedra by `order` (old -> new) and vertices of old tet t by maps[t].
inline pachner::Triangulation relabel(const pachner::Triangulation& tri, const std::vector<std::size_t>& order,
                                      const std::vector<pachner::Perm4>& maps) {
  pachner::Triangulation out(tri.size());
  for (std::size_t t = 0; t < tri.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (g.boundary()) continue;
      const std::size_t d = g.destination->tet;
      const int nf = maps[t][f];
      if (!out.is_boundary(order[t], nf)) continue;
      out.join(order[t], nf, order[d], maps[d] * g.perm * maps[t].inverse());
    }
  return out;
}

inline pachner::Triangulation random_relabel(const pachner::Triangulation& tri, std::mt19937_64& rng) {
  std::vector<std::size_t> order(tri.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<pachner::Perm4> maps;
  for (std::size_t t = 0; t < tri.size(); ++t)
    maps.push_back(pachner::Perm4::from_index(std::uniform_int_distribution<int>(0, 23)(rng)));
  return relabel(tri, order, maps);
}

/// Random connected gluing of n tetrahedra; `closed` pairs every face.
inline pachner::Triangulation random_triangulation(std::mt19937_64& rng, std::size_t n, bool closed = true) {
  for (;;) {
    pachner::Triangulation t(n);
    std::vector<std::size_t> slots(4 * n);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    const std::size_t used = closed ? slots.size() : slots.size() - 2 * std::uniform_int_distribution<std::size_t>(0, n)(rng);
    for (std::size_t i = 0; i + 1 < used; i += 2) {
      const std::size_t a = slots[i], b = slots[i + 1];
      std::vector<pachner::Perm4> ok;
      for (int p = 0; p < 24; ++p)
        if (pachner::Perm4::from_index(p)[a % 4] == static_cast<int>(b % 4)) ok.push_back(pachner::Perm4::from_index(p));
      t.join(a / 4, static_cast<int>(a % 4), b / 4, ok[std::uniform_int_distribution<std::size_t>(0, 5)(rng)]);
    }
    if (pachner::is_connected(t)) return t;
  }
}

}  // namespace testing_helpers
