#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "pachner/graph.hpp"

using namespace pachner;
using namespace testing_helpers;

namespace {

// Plain breadth-first search over signatures with std containers.
struct NaiveGraph {
  std::map<std::string, int> depth;
  std::set<std::pair<std::string, std::string>> edges;
};

NaiveGraph naive_bfs(const std::string& seed, MoveSet kinds, int max_depth) {
  NaiveGraph g;
  g.depth[seed] = 0;
  std::vector<std::string> frontier{seed};
  for (int d = 0; d < max_depth; ++d) {
    std::vector<std::string> next;
    for (const auto& s : frontier) {
      const auto t = decode(s);
      const auto sk = compute_skeleton(t);
      for (const auto& h : enumerate_moves(t, sk, kinds)) {
        const std::string c = encode(apply_move(t, sk, h));
        if (!g.depth.count(c)) {
          g.depth[c] = d + 1;
          next.push_back(c);
        }
        if (c != s) g.edges.insert(std::minmax(s, c));
      }
    }
    frontier = std::move(next);
  }
  return g;
}

}  // namespace

TEST(Graph, SingleNodeAtDepthZero) {
  const auto g = generate("cMcabbgqs", MoveSet::bistellar23(), 0);
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.attrs[0], (NodeAttrs{2, 0, 1}));
}

TEST(Graph, SeedIsCanonicalised) {
  std::mt19937_64 rng(1);
  const std::string relabelled = encode(random_relabel(decode("cMcabbgqs"), rng));
  EXPECT_EQ(generate(relabelled, MoveSet::bistellar23(), 1).seed, "cMcabbgqs");
}

TEST(Graph, MatchesNaiveSearch) {
  for (const std::string seed : {"cMcabbgqs", "cMcabbjaj", "eLAkbcbddhhjhk", "cPcbbbadu"}) {
    for (MoveSet kinds : {MoveSet::bistellar23(), MoveSet::bistellar14(), MoveSet::all()}) {
      const int depth = kinds == MoveSet::bistellar23() ? 3 : 2;
      const auto g = generate(seed, kinds, depth);
      const auto n = naive_bfs(seed, kinds, depth);
      ASSERT_EQ(g.node_count(), n.depth.size()) << seed << ' ' << kinds.str();
      EXPECT_EQ(g.edge_count(), n.edges.size()) << seed << ' ' << kinds.str();
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        EXPECT_EQ(g.attrs[i].depth, n.depth.at(g.nodes[i]));
        EXPECT_EQ(g.attrs[i].tet_count, static_cast<int>(decode(g.nodes[i]).size()));
        EXPECT_EQ(g.attrs[i].vertex_count, static_cast<int>(vertex_count(decode(g.nodes[i]))));
        if (i > 0) {
          EXPECT_LE(g.attrs[i - 1].depth, g.attrs[i].depth);
        }
      }
      for (auto [u, v] : g.edges) {
        EXPECT_LT(u, v);
        EXPECT_TRUE(n.edges.count(std::minmax(g.nodes[u], g.nodes[v])));
        EXPECT_LE(std::abs(g.attrs[u].depth - g.attrs[v].depth), 1);
      }
      EXPECT_TRUE(std::is_sorted(g.edges.begin(), g.edges.end()));
    }
  }
}

TEST(Graph, ThreeSphereLevelCounts) {
  // Frozen from an independent triangulation library.
  EXPECT_EQ(generate("cMcabbgqs", MoveSet::bistellar23(), 4).node_count(), 380u);
  EXPECT_EQ(generate("cMcabbgqs", MoveSet::bistellar14(), 3).node_count(), 36u);
  EXPECT_EQ(generate("bkaagj", MoveSet::bistellar14(), 3).node_count(), 16u);
  EXPECT_EQ(generate("eLPkbcdddmbvgg", MoveSet::bistellar14(), 3).node_count(), 167u);
}

TEST(Graph, PublishedDepthFiveNodeCounts) {
  const std::vector<std::pair<std::string, std::size_t>> rows = {
      {"cMcabbgqs", 2979},      {"cMcabbjaj", 1123},         {"cMcabbgqw", 1636},
      {"eLAkbcbddhhjhk", 3161}, {"cMcabbjqw", 1368},         {"gvLQQedfedffrwawrhh", 1280},
      {"fvPQcdecedekrsnrs", 2060}};
  for (const auto& [seed, nodes] : rows) EXPECT_EQ(generate(seed, MoveSet::bistellar23(), 5).node_count(), nodes) << seed;
  EXPECT_EQ(generate("jLvAzQQcfeghighiiuquanobwwr", MoveSet::bistellar23(), 3).node_count(), 3553u);
}

TEST(Graph, ParallelExpansionIsDeterministic) {
  GenerateOptions serial, parallel;
  parallel.jobs = 4;
  const auto a = generate("cMcabbjqw", MoveSet::bistellar23(), 5, serial);
  const auto b = generate("cMcabbjqw", MoveSet::bistellar23(), 5, parallel);
  EXPECT_EQ(a, b);
}

TEST(Graph, WithoutEdgesKeepsNodes) {
  GenerateOptions o;
  o.store_edges = false;
  const auto a = generate("cMcabbgqs", MoveSet::bistellar23(), 4);
  const auto b = generate("cMcabbgqs", MoveSet::bistellar23(), 4, o);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_TRUE(b.edges.empty());
}

TEST(Graph, BudgetExceededCarriesCompletedLevels) {
  GenerateOptions o;
  o.max_nodes = 100;
  try {
    generate("cMcabbgqs", MoveSet::bistellar23(), 6, o);
    FAIL() << "expected a budget error";
  } catch (const GraphBudgetExceeded& e) {
    const auto full = generate("cMcabbgqs", MoveSet::bistellar23(), e.completed_depth());
    EXPECT_EQ(e.partial(), full);
    EXPECT_LE(e.partial().node_count(), 100u);
    EXPECT_GT(generate("cMcabbgqs", MoveSet::bistellar23(), e.completed_depth() + 1).node_count(), 100u);
  }
}

TEST(Graph, InvalidInputs) {
  EXPECT_THROW(generate("cMcabbgqs", MoveSet::bistellar23(), -1), Error);
  EXPECT_THROW(generate("not-a-sig", MoveSet::bistellar23(), 1), ParseError);
}

TEST(Graph, GrowthProfile) {
  const auto g = generate("cMcabbgqs", MoveSet::bistellar23(), 4);
  const auto p = growth_profile(g);
  ASSERT_EQ(p.cumulative.size(), 5u);
  EXPECT_EQ(p.cumulative.back(), g.node_count());
  EXPECT_EQ(p.edges.back(), g.edge_count());
  EXPECT_EQ(p.new_nodes[0], 1u);
  for (int d = 0; d <= 4; ++d)
    EXPECT_EQ(p.cumulative[d], generate("cMcabbgqs", MoveSet::bistellar23(), d).node_count());
}

TEST(Graph, ExportImportRoundTrip) {
  const auto g = generate("cMcabbjaj", MoveSet::all(), 2);
  std::stringstream buf;
  export_graph(g, buf);
  EXPECT_EQ(import_graph(buf), g);
}

TEST(Graph, ImportRejectsMalformedFiles) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return import_graph(in);
  };
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("graph v2 x 23 1\n"), ParseError);
  const std::string head = "pachner v1 cMcabbgqs 23,32 1\n0 cMcabbgqs 2 0\n1 dLQacccjsnk 3 1\n";
  EXPECT_NO_THROW(parse(head + "edges\n0 1\n"));
  EXPECT_THROW(parse(head), ParseError);
  EXPECT_THROW(parse(head + "edges\n1 0\n"), ParseError);
  EXPECT_THROW(parse(head + "edges\n0 2\n"), ParseError);
  EXPECT_THROW(parse(head + "edges\n0 1\n0 1\n"), ParseError);
  EXPECT_THROW(parse("pachner v1 cMcabbgqs 23 1\n0 cMcabbgqs 2 0\n0 cMcabbgqs 2 0\nedges\n"), ParseError);
}

TEST(Graph, BatchRecordsFailuresAndContinues) {
  GenerateOptions o;
  o.max_nodes = 60;
  const auto out = batch_generate({"cMcabbgqs", "bogus!", "cMcabbjaj"}, MoveSet::bistellar23(), 3, o);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(out[0].ok);
  EXPECT_EQ(out[0].node_count, generate("cMcabbgqs", MoveSet::bistellar23(), 3).node_count());
  EXPECT_EQ(out[0].seed_tets, 2);
  EXPECT_FALSE(out[1].ok);
  EXPECT_FALSE(out[1].error.empty());
  std::size_t total = 0;
  for (auto [d, c] : out[0].degree_histogram) total += c;
  EXPECT_EQ(total, out[0].node_count);

  o.max_nodes = 5;
  const auto tight = batch_generate({"cMcabbgqs"}, MoveSet::bistellar23(), 6, o);
  EXPECT_FALSE(tight[0].ok);
  EXPECT_GE(tight[0].completed_depth, 0);
}
