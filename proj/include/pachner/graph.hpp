#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pachner/error.hpp"
#include "pachner/isosig.hpp"
#include "pachner/moves.hpp"
#include "pachner/triangulation.hpp"

namespace pachner {

struct NodeAttrs {
  int tet_count = 0;
  int depth = 0;
  int vertex_count = 0;

  friend bool operator==(const NodeAttrs&, const NodeAttrs&) = default;
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Undirected graph of triangulation classes.  Node indices follow discovery
/// order (seed is 0); edges are stored once as (u, v) with u < v, sorted.
class PachnerGraph {
 public:
  std::string seed;
  MoveSet kinds;
  int depth_bound = 0;

  std::vector<std::string> nodes;
  std::vector<NodeAttrs> attrs;
  std::vector<Edge> edges;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  std::vector<std::vector<std::uint32_t>> adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(nodes.size());
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  friend bool operator==(const PachnerGraph&, const PachnerGraph&) = default;
};

struct GenerateOptions {
  std::size_t max_nodes = 5'000'000;
  unsigned jobs = 1;
  bool store_edges = true;
};

/// Raised when the node budget is hit.  Carries the graph truncated to the
/// last fully completed depth.
class GraphBudgetExceeded : public BudgetExceeded {
 public:
  GraphBudgetExceeded(PachnerGraph partial, int completed_depth)
      : BudgetExceeded("node budget exceeded; completed depth " + std::to_string(completed_depth),
                       completed_depth),
        partial_(std::move(partial)) {}

  const PachnerGraph& partial() const noexcept { return partial_; }

 private:
  PachnerGraph partial_;
};

namespace detail {

struct Expansion {
  std::vector<std::string> children;  // one per enumerated handle, in handle order
};

inline Expansion expand_node(const std::string& sig, MoveSet kinds) {
  const Triangulation tri = decode(sig);
  const Skeleton sk = compute_skeleton(tri);
  Expansion out;
  for (const MoveHandle& h : enumerate_moves(tri, sk, kinds)) out.children.push_back(encode(apply_move(tri, sk, h)));
  return out;
}

inline void expand_range(const std::vector<std::string>& nodes, std::size_t begin, std::size_t end, MoveSet kinds,
                         unsigned jobs, std::vector<Expansion>& out) {
  out.assign(end - begin, {});
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(end - begin)));
  if (jobs <= 1) {
    for (std::size_t i = begin; i < end; ++i) out[i - begin] = expand_node(nodes[i], kinds);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  for (unsigned w = 0; w < jobs; ++w)
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = begin + w; i < end; i += jobs) out[i - begin] = expand_node(nodes[i], kinds);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

inline void truncate_to_depth(PachnerGraph& g, int depth) {
  std::size_t keep = 0;
  while (keep < g.nodes.size() && g.attrs[keep].depth <= depth) ++keep;
  g.nodes.resize(keep);
  g.attrs.resize(keep);
  std::erase_if(g.edges, [&](const Edge& e) {
    return e.second >= keep || (g.attrs[e.first].depth == depth && g.attrs[e.second].depth == depth);
  });
  g.depth_bound = depth;
}

}  // namespace detail

/// Breadth-first expansion of the Pachner graph around `seed` up to `depth`
/// moves, deduplicating nodes by signature.
///
/// Frontier nodes may be expanded on several threads, but children are
/// committed in (parent index, handle order), so indices match a sequential run.
inline PachnerGraph generate(const std::string& seed, MoveSet kinds, int depth, const GenerateOptions& opt = {}) {
  if (depth < 0) throw Error("generate: depth must be non-negative");
  const Triangulation start = decode(seed);
  if (auto report = validate(start); !report) throw Error(std::string("generate: invalid seed: ") + to_string(report.violation));

  PachnerGraph g;
  g.kinds = kinds;
  g.depth_bound = depth;
  g.seed = encode(start);
  g.nodes.push_back(g.seed);
  g.attrs.push_back({static_cast<int>(start.size()), 0, static_cast<int>(vertex_count(start))});

  std::unordered_map<std::string, std::uint32_t> index;
  index.emplace(g.seed, 0);
  std::unordered_set<std::uint64_t> edge_seen;

  // Vertex counts are only needed when the enabled moves can change them.
  auto finish = [&] {
    const bool vertices_fixed = !kinds.contains(MoveKind::k14) && !kinds.contains(MoveKind::k41);
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      g.attrs[i].vertex_count = vertices_fixed ? g.attrs[0].vertex_count
                                               : static_cast<int>(vertex_count(decode(g.nodes[i])));
    std::sort(g.edges.begin(), g.edges.end());
  };

  std::size_t level_begin = 0, level_end = 1;
  const std::size_t chunk = 4096;
  std::vector<detail::Expansion> batch;
  for (int d = 0; d < depth && level_begin < level_end; ++d) {
    for (std::size_t b = level_begin; b < level_end; b += chunk) {
      const std::size_t e = std::min(level_end, b + chunk);
      detail::expand_range(g.nodes, b, e, kinds, opt.jobs, batch);
      for (std::size_t i = b; i < e; ++i) {
        const auto parent = static_cast<std::uint32_t>(i);
        for (std::string& child : batch[i - b].children) {
          auto [it, fresh] = index.try_emplace(child, static_cast<std::uint32_t>(g.nodes.size()));
          if (fresh) {
            if (g.nodes.size() >= opt.max_nodes) {
              detail::truncate_to_depth(g, d);
              finish();
              throw GraphBudgetExceeded(std::move(g), d);
            }
            g.attrs.push_back({static_cast<int>(signature_tet_count(child)), d + 1, 0});
            g.nodes.push_back(std::move(child));
          }
          const std::uint32_t c = it->second;
          if (opt.store_edges && c != parent && edge_seen.insert(detail::edge_key(parent, c)).second)
            g.edges.emplace_back(std::min(parent, c), std::max(parent, c));
        }
      }
    }
    level_begin = level_end;
    level_end = g.nodes.size();
  }

  finish();
  return g;
}

struct GrowthProfile {
  std::vector<std::size_t> new_nodes;   // nodes discovered at each depth
  std::vector<std::size_t> cumulative;  // nodes with depth <= d
  std::vector<std::size_t> edges;       // edges with both ends at depth <= d
  std::vector<double> density;
};

inline GrowthProfile growth_profile(const PachnerGraph& g) {
  GrowthProfile p;
  const int levels = g.depth_bound + 1;
  p.new_nodes.assign(levels, 0);
  for (const auto& a : g.attrs)
    if (a.depth < levels) ++p.new_nodes[a.depth];
  std::vector<std::size_t> edges_at(levels, 0);
  for (auto [u, v] : g.edges) ++edges_at[std::max(g.attrs[u].depth, g.attrs[v].depth)];
  std::size_t nodes = 0, edges = 0;
  for (int d = 0; d < levels; ++d) {
    nodes += p.new_nodes[d];
    edges += edges_at[d];
    p.cumulative.push_back(nodes);
    p.edges.push_back(edges);
    p.density.push_back(nodes < 2 ? 0.0 : 2.0 * static_cast<double>(edges) / (static_cast<double>(nodes) * (nodes - 1)));
  }
  return p;
}

/// Outcome of one seed in a batch run.
struct SeedSummary {
  std::string seed;
  bool ok = false;
  std::string error;
  int completed_depth = -1;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  int seed_tets = 0;
  double density = 0.0;
  int min_tets = 0;
  double avg_tets = 0.0;
  std::map<std::size_t, std::size_t> degree_histogram;  // degree -> node count
};

using SummaryHook = std::function<void(const PachnerGraph&, SeedSummary&)>;

/// Generates one graph per seed, independently and in input order.  A failing
/// seed is recorded in its summary and the batch carries on.
inline std::vector<SeedSummary> batch_generate(const std::vector<std::string>& seeds, MoveSet kinds, int depth,
                                               const GenerateOptions& opt = {}, const SummaryHook& hook = {},
                                               unsigned seed_jobs = 1) {
  std::vector<SeedSummary> out(seeds.size());
  auto run_one = [&](std::size_t i) {
    SeedSummary& s = out[i];
    s.seed = seeds[i];
    try {
      GenerateOptions per_seed = opt;
      per_seed.jobs = 1;
      per_seed.max_nodes = std::max<std::size_t>(1, opt.max_nodes / std::max(1u, seed_jobs));
      const PachnerGraph g = generate(seeds[i], kinds, depth, per_seed);
      s.ok = true;
      s.completed_depth = depth;
      s.node_count = g.node_count();
      s.edge_count = g.edge_count();
      s.seed_tets = g.attrs[0].tet_count;
      const double n = static_cast<double>(g.node_count());
      s.density = g.node_count() < 2 ? 0.0 : 2.0 * g.edge_count() / (n * (n - 1));
      std::vector<std::size_t> degree(g.node_count(), 0);
      for (auto [u, v] : g.edges) ++degree[u], ++degree[v];
      for (std::size_t d : degree) ++s.degree_histogram[d];
      s.min_tets = g.attrs[0].tet_count;
      double total = 0;
      for (const auto& a : g.attrs) {
        s.min_tets = std::min(s.min_tets, a.tet_count);
        total += a.tet_count;
      }
      s.avg_tets = total / n;
      if (hook) hook(g, s);
    } catch (const GraphBudgetExceeded& e) {
      s.error = e.what();
      s.completed_depth = e.completed_depth();
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  };
  seed_jobs = std::max(1u, seed_jobs);
  if (seed_jobs == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < seed_jobs; ++w)
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < seeds.size(); i += seed_jobs) run_one(i);
      });
    for (auto& t : workers) t.join();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph file format
//
//   pachner v1 <seed> <kinds> <depth>
//   <index> <isosig> <tetCount> <depth>     one per node, in index order
//   edges
//   <u> <v>                                 u < v, sorted
//
// Lines starting with '#' are comments.
// ---------------------------------------------------------------------------

inline void export_graph(const PachnerGraph& g, std::ostream& out) {
  out << "pachner v1 " << g.seed << ' ' << g.kinds.str() << ' ' << g.depth_bound << '\n';
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    out << i << ' ' << g.nodes[i] << ' ' << g.attrs[i].tet_count << ' ' << g.attrs[i].depth << '\n';
  out << "edges\n";
  for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
}

inline void export_graph(const PachnerGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  export_graph(g, out);
}

inline PachnerGraph import_graph(std::istream& in) {
  PachnerGraph g;
  std::string line;
  std::size_t line_no = 0;
  bool header = false, in_edges = false;
  std::unordered_set<std::string> seen;
  auto fail = [&](const std::string& msg) { return ParseError("graph file line " + std::to_string(line_no) + ": " + msg, line_no); };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!header) {
      std::string magic, version, kinds;
      if (!(ls >> magic >> version >> g.seed >> kinds >> g.depth_bound) || magic != "pachner" || version != "v1")
        throw fail("bad header");
      g.kinds = MoveSet::parse(kinds);
      header = true;
      continue;
    }
    if (!in_edges) {
      if (line == "edges") {
        in_edges = true;
        continue;
      }
      std::size_t idx;
      std::string sig;
      NodeAttrs a;
      if (!(ls >> idx >> sig >> a.tet_count >> a.depth)) throw fail("bad node line");
      if (idx != g.nodes.size()) throw fail("node index out of sequence");
      if (!is_signature_text(sig)) throw fail("bad signature");
      if (!seen.insert(sig).second) throw fail("duplicate node " + sig);
      g.nodes.push_back(sig);
      g.attrs.push_back(a);
      continue;
    }
    long long u, v;
    if (!(ls >> u >> v)) throw fail("bad edge line");
    if (u < 0 || v < 0 || u >= static_cast<long long>(g.nodes.size()) || v >= static_cast<long long>(g.nodes.size()))
      throw fail("edge endpoint out of range");
    if (u >= v) throw fail("edge must satisfy u < v");
    const Edge e{static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)};
    if (!g.edges.empty() && !(g.edges.back() < e)) throw fail("edges must be sorted and distinct");
    g.edges.push_back(e);
  }
  if (!header) throw ParseError("graph file is empty", 0);
  if (!in_edges) throw ParseError("graph file has no edges section", line_no);
  if (g.nodes.empty()) throw ParseError("graph file has no nodes", line_no);
  const bool vertices_fixed = !g.kinds.contains(MoveKind::k14) && !g.kinds.contains(MoveKind::k41);
  const int v0 = static_cast<int>(vertex_count(decode(g.nodes[0])));
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    g.attrs[i].vertex_count = vertices_fixed ? v0 : static_cast<int>(vertex_count(decode(g.nodes[i])));
  return g;
}

inline PachnerGraph import_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return import_graph(in);
}

}  // namespace pachner
