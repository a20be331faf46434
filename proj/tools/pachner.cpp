// pachner: command-line front end for signature coding, Pachner graph
// generation, graph metrics and the signature classifier.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pachner/dataset.hpp"
#include "pachner/graph.hpp"
#include "pachner/isosig.hpp"
#include "pachner/metrics.hpp"
#include "pachner/mlp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pachner;

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kValidation = 1, kBudget = 2 };

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string digest(const fs::path& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : read_file(p)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

/// Collects what a run did; written as manifest.json next to the outputs.
struct Manifest {
  std::string subcommand;
  json flags = json::object();
  json seeds = json::object();
  json inputs = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void input(const std::string& name, const fs::path& p) { inputs[name] = {{"path", p.string()}, {"digest", digest(p)}}; }

  void write(const fs::path& p) const {
    json j;
    j["subcommand"] = subcommand;
    j["flags"] = flags;
    j["seeds"] = seeds;
    j["inputs"] = inputs;
    j["version"] = kVersion;
    j["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(p, j);
  }
};

void write_growth(const PachnerGraph& g, const fs::path& p) {
  const GrowthProfile prof = growth_profile(g);
  auto out = open_out(p);
  out << "depth,new_nodes,cumulative_nodes,cumulative_edges,density\n";
  for (std::size_t d = 0; d < prof.new_nodes.size(); ++d)
    out << d << ',' << prof.new_nodes[d] << ',' << prof.cumulative[d] << ',' << prof.edges[d] << ','
        << prof.density[d] << '\n';
}

json metrics_json(const MetricsReport& r) {
  json cb = json::array();
  for (auto [len, f] : r.cycle_basis) cb.push_back({len, f});
  json deg = json::object();
  for (auto [d, f] : r.degree_histogram) deg[std::to_string(d)] = f;
  return {{"node_count", r.node_count},
          {"edge_count", r.edge_count},
          {"density", r.density},
          {"triangle_clustering", r.triangle_clustering},
          {"square_clustering", r.square_clustering},
          {"wiener_full", r.wiener_full},
          {"wiener_normalized", r.wiener_normalized},
          {"centrality_argmax_index", r.centrality_argmax},
          {"centrality_range", r.centrality_range},
          {"cycle_basis_histogram", cb},
          {"min_tet_index", r.min_tet_index},
          {"min_tet_count", r.min_tet_count},
          {"avg_tet_count", r.avg_tet_count},
          {"degree_histogram", deg}};
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  return read_isosig_list(in);
}

// Minimal CSV splitting; fields here never contain commas or quotes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw Error("CSV is missing column '" + name + "'");
  }
};

CsvTable read_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (t.header.empty()) {
      t.header = split_csv(line);
      continue;
    }
    auto row = split_csv(line);
    if (row.size() != t.header.size()) throw Error(p.string() + ": row has wrong number of fields: " + line);
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(p.string() + ": empty CSV");
  return t;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("bad number for " + what + ": '" + s + "'");
  }
}

struct Common {
  std::size_t max_nodes = 5'000'000;
  unsigned jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--max-nodes", c.max_nodes, "Node budget for graph generation")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------------------

int cmd_generate(const std::string& seed, const std::string& moves, int depth, const fs::path& out_dir,
                 const Common& c) {
  Manifest m{"generate"};
  m.flags = {{"seed", seed}, {"moves", moves}, {"depth", depth}, {"max_nodes", c.max_nodes}, {"jobs", c.jobs}};
  GenerateOptions opt;
  opt.max_nodes = c.max_nodes;
  opt.jobs = c.jobs;
  const MoveSet kinds = MoveSet::parse(moves);
  fs::create_directories(out_dir);
  try {
    const PachnerGraph g = generate(seed, kinds, depth, opt);
    export_graph(g, (out_dir / "graph.txt").string());
    write_growth(g, out_dir / "growth.csv");
    m.write(out_dir / "manifest.json");
    std::cout << "nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
    return kOk;
  } catch (const GraphBudgetExceeded& e) {
    export_graph(e.partial(), (out_dir / "graph.txt").string());
    write_growth(e.partial(), out_dir / "growth.csv");
    m.flags["completed_depth"] = e.completed_depth();
    m.write(out_dir / "manifest.json");
    throw;
  }
}

int cmd_analyze(const fs::path& graph, const fs::path& out_dir, bool skip_wiener, bool skip_cycles) {
  Manifest m{"analyze"};
  m.flags = {{"graph", graph.string()}, {"skip_wiener", skip_wiener}, {"skip_cycle_basis", skip_cycles}};
  m.input("graph", graph);
  const PachnerGraph g = import_graph(graph.string());
  MetricsOptions opt;
  opt.wiener = !skip_wiener;
  opt.cycle_basis = !skip_cycles;
  json j = metrics_json(analyze(g, opt));
  j["seed"] = g.seed;
  j["moves"] = g.kinds.str();
  j["depth"] = g.depth_bound;
  write_json(out_dir / "metrics.json", j);
  m.write(out_dir / "manifest.json");
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_census(const fs::path& seeds_file, const std::string& moves, int depth, const fs::path& out_dir,
               const Common& c) {
  Manifest m{"census"};
  m.flags = {{"seeds", seeds_file.string()}, {"moves", moves}, {"depth", depth}, {"max_nodes", c.max_nodes}, {"jobs", c.jobs}};
  m.input("seeds", seeds_file);
  const auto seeds = read_lines(seeds_file);
  if (seeds.empty()) throw Error("census: seed list is empty");
  GenerateOptions opt;
  opt.max_nodes = c.max_nodes;
  const auto summaries = batch_generate(seeds, MoveSet::parse(moves), depth, opt, {}, c.jobs);

  auto out = open_out(out_dir / "summaries.csv");
  out << "isosig,ok,completed_depth,node_count,edge_count,seed_tets,density,min_tets,avg_tets,error\n";
  std::vector<DegreeHistogram> hists;
  for (const auto& s : summaries) {
    std::string err = s.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << s.seed << ',' << (s.ok ? 1 : 0) << ',' << s.completed_depth << ',' << s.node_count << ',' << s.edge_count
        << ',' << s.seed_tets << ',' << s.density << ',' << s.min_tets << ',' << s.avg_tets << ',' << err << '\n';
    if (s.ok) {
      DegreeHistogram h;
      for (auto [d, f] : s.degree_histogram) h[d] = static_cast<double>(f);
      hists.push_back(std::move(h));
    }
  }
  if (!hists.empty()) {
    auto dd = open_out(out_dir / "degree_distribution.csv");
    dd << "degree,mean_frequency\n";
    for (auto [d, f] : mean_degree_distribution(hists)) dd << d << ',' << f << '\n';
  }
  m.write(out_dir / "manifest.json");
  std::size_t ok = 0;
  for (const auto& s : summaries) ok += s.ok;
  std::cout << ok << " of " << summaries.size() << " seeds completed\n";
  return ok == summaries.size() ? kOk : kBudget;
}

int cmd_correlate(const fs::path& summaries, const fs::path& invariants, const std::string& column, std::size_t bins,
                  double bound_c, const fs::path& out_dir) {
  Manifest m{"correlate"};
  m.flags = {{"summaries", summaries.string()}, {"invariants", invariants.string()}, {"column", column},
             {"bins", bins},                    {"bound_c", bound_c}};
  m.input("summaries", summaries);
  m.input("invariants", invariants);
  const CsvTable st = read_csv(summaries);
  const CsvTable it = read_csv(invariants);
  std::vector<std::pair<std::string, double>> sizes, inv;
  const std::size_t sk = st.column("isosig"), sn = st.column("node_count"), sok = st.column("ok");
  for (const auto& r : st.rows)
    if (r[sok] == "1") sizes.emplace_back(r[sk], to_double(r[sn], "node_count"));
  const std::size_t ik = it.column("isosig"), iv = it.column(column);
  for (const auto& r : it.rows) inv.emplace_back(r[ik], to_double(r[iv], column));

  const EnvelopeFit fit = invariant_correlation(sizes, inv, bins, bound_c);
  auto sc = open_out(out_dir / "scatter.csv");
  sc << "isosig," << column << ",node_count\n";
  for (const auto& r : fit.rows) sc << r.seed << ',' << r.invariant << ',' << r.size << '\n';
  json env = json::array();
  for (auto [x, y] : fit.envelope) env.push_back({x, y});
  const json j = {{"slope", fit.slope},     {"intercept", fit.intercept}, {"bins", bins},
                  {"bound_c", fit.bound_c}, {"coverage", fit.coverage},   {"rows", fit.rows.size()},
                  {"column", column},       {"envelope", env}};
  write_json(out_dir / "envelope.json", j);
  m.write(out_dir / "manifest.json");
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_lengths(const fs::path& graph) {
  const PachnerGraph g = import_graph(graph.string());
  std::cout << "length,count\n";
  for (auto [len, n] : length_histogram(g)) std::cout << len << ',' << n << '\n';
  return kOk;
}

int cmd_sample(const fs::path& graph, std::size_t length, std::size_t count, std::uint64_t seed, const fs::path& out) {
  Manifest m{"sample"};
  m.flags = {{"graph", graph.string()}, {"length", length}, {"count", count}, {"out", out.string()}};
  m.seeds["rng_seed"] = seed;
  m.input("graph", graph);
  const PachnerGraph g = import_graph(graph.string());
  const auto picked = sample_fixed_length(g, length, count, seed);
  auto o = open_out(out);
  for (const auto& s : picked) o << s << '\n';
  m.write(fs::path(out.string() + ".manifest.json"));
  std::cout << picked.size() << " signatures\n";
  return kOk;
}

int cmd_dataset(const fs::path& a, const fs::path& b, std::size_t length, std::uint64_t seed, std::size_t folds,
                const std::vector<std::string>& names, const fs::path& out_dir) {
  Manifest m{"dataset"};
  m.flags = {{"class_a", a.string()}, {"class_b", b.string()}, {"length", length}, {"folds", folds}, {"names", names}};
  m.seeds["rng_seed"] = seed;
  m.input("class_a", a);
  m.input("class_b", b);
  std::array<std::string, 2> nm{a.stem().string(), b.stem().string()};
  if (names.size() == 2) nm = {names[0], names[1]};
  else if (!names.empty()) throw Error("dataset: --names takes exactly two values");
  const BinaryDataset ds = build_binary_dataset(read_lines(a), read_lines(b), length, seed, folds, nm);
  write_dataset(ds, out_dir);
  m.write(out_dir / "manifest.json");
  std::cout << ds.samples.size() << " samples in " << ds.folds.size() << " folds\n";
  return kOk;
}

int cmd_train(const fs::path& dataset_dir, const fs::path& config_file, const fs::path& out_dir, unsigned jobs) {
  Manifest m{"train"};
  m.flags = {{"dataset", dataset_dir.string()}, {"config", config_file.string()}, {"jobs", jobs}};
  m.input("dataset_csv", dataset_dir / "dataset.csv");
  m.input("folds", dataset_dir / "folds.json");
  MLPConfig config;
  if (!config_file.empty()) {
    m.input("config", config_file);
    try {
      config = json::parse(read_file(config_file)).get<MLPConfig>();
    } catch (const json::exception& e) {
      throw Error(std::string("bad config: ") + e.what());
    }
  }
  config.validate();
  m.seeds["mlp_seed"] = config.seed;
  const BinaryDataset ds = read_dataset(dataset_dir);
  m.seeds["dataset_seed"] = ds.seed;
  const CrossValidation cv = cross_validate(ds, config, jobs);

  fs::create_directories(out_dir / "models");
  json folds = json::array(), seeds = json::array();
  auto curve = open_out(out_dir / "training_curve.csv");
  curve << "fold,epoch,train_loss,train_accuracy,val_loss,val_accuracy\n";
  for (const auto& f : cv.folds) {
    save_model(f.model, out_dir / "models" / ("fold_" + std::to_string(f.fold) + ".json"));
    seeds.push_back(f.seed);
    folds.push_back({{"fold", f.fold},
                     {"seed", f.seed},
                     {"accuracy", f.test.accuracy},
                     {"mcc", f.test.mcc},
                     {"confusion", {{"tp", f.test.tp}, {"tn", f.test.tn}, {"fp", f.test.fp}, {"fn", f.test.fn}}}});
    for (const auto& h : f.model.history)
      curve << f.fold << ',' << h.epoch << ',' << h.train_loss << ',' << h.train_accuracy << ',' << h.val_loss << ','
            << h.val_accuracy << '\n';
  }
  const json report = {{"pair", ds.class_names[0] + "-" + ds.class_names[1]},
                       {"accuracyMean", cv.accuracy_mean},
                       {"accuracyStd", cv.accuracy_std},
                       {"mccMean", cv.mcc_mean},
                       {"mccStd", cv.mcc_std},
                       {"seeds", seeds},
                       {"config", config},
                       {"folds", folds}};
  write_json(out_dir / "cv_report.json", report);
  m.write(out_dir / "manifest.json");
  std::cout << report["pair"].get<std::string>() << " accuracy " << cv.accuracy_mean << " mcc " << cv.mcc_mean << '\n';
  return kOk;
}

int cmd_saliency(const fs::path& models_dir, const fs::path& dataset_dir, const fs::path& out_dir, double threshold) {
  Manifest m{"saliency"};
  m.flags = {{"models", models_dir.string()}, {"dataset", dataset_dir.string()}, {"threshold", threshold}};
  const BinaryDataset ds = read_dataset(dataset_dir);
  m.input("dataset_csv", dataset_dir / "dataset.csv");

  fs::path dir = models_dir;
  if (fs::is_directory(dir / "models")) dir /= "models";
  const std::regex name(R"(fold_(\d+)\.json)");
  std::map<std::size_t, fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::smatch sm;
    const std::string fn = e.path().filename().string();
    if (std::regex_match(fn, sm, name)) files[std::stoul(sm[1])] = e.path();
  }
  if (files.empty()) throw Error("saliency: no fold_<i>.json checkpoints in " + dir.string());

  std::vector<MLPModel> models;
  std::vector<std::vector<std::string>> tests;
  for (const auto& [fold, path] : files) {
    if (fold >= ds.folds.size()) throw Error("saliency: checkpoint for unknown fold " + std::to_string(fold));
    m.input("model_" + std::to_string(fold), path);
    models.push_back(load_model(path));
    std::vector<std::string> t;
    for (std::size_t i : ds.folds[fold]) t.push_back(ds.samples[i].isosig);
    tests.push_back(std::move(t));
  }
  std::vector<const MLPModel*> ptrs;
  for (const auto& mm : models) ptrs.push_back(&mm);
  const SaliencyReport r = gradient_saliency(ptrs, tests, ds.length, threshold);

  auto mat = open_out(out_dir / "saliency_matrix.csv");
  mat << "position";
  for (char ch : kAlphabet) mat << ',' << ch;
  mat << '\n';
  for (std::size_t b = 0; b < r.length; ++b) {
    mat << b;
    for (double v : r.matrix[b]) mat << ',' << v;
    mat << '\n';
  }
  auto lh = open_out(out_dir / "letter_histogram.csv");
  lh << "index,letter,count\n";
  for (std::size_t c = 0; c < kAlphabetSize; ++c) lh << c << ',' << kAlphabet[c] << ',' << r.letter_histogram[c] << '\n';
  auto ph = open_out(out_dir / "position_histogram.csv");
  ph << "position,count\n";
  for (std::size_t b = 0; b < r.length; ++b) ph << b << ',' << r.position_histogram[b] << '\n';
  m.write(out_dir / "manifest.json");
  std::size_t important = 0;
  for (std::size_t n : r.position_histogram) important += n;
  std::cout << important << " entries above " << threshold << '\n';
  return kOk;
}

int cmd_roundtrip(const fs::path& file) {
  const auto sigs = read_lines(file);
  std::size_t failed = 0;
  for (const auto& s : sigs) {
    std::string got;
    try {
      got = encode(decode(s));
    } catch (const std::exception& e) {
      got = std::string("error: ") + e.what();
    }
    if (got == s) {
      std::cout << "PASS " << s << '\n';
    } else {
      ++failed;
      std::cout << "FAIL " << s << " -> " << got << '\n';
    }
  }
  std::cout << (sigs.size() - failed) << '/' << sigs.size() << " passed\n";
  return failed == 0 ? kOk : kValidation;
}

void report_error(const std::string& kind, const std::string& message, json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  std::cerr << extra.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isomorphism signatures, Pachner graphs, graph metrics and signature classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::string seed, moves = "23";
  int depth = 0;
  fs::path out, graph, seeds_file, summaries, invariants, class_a, class_b, dataset_dir, config_file, models_dir, isosigs;
  std::string column = "systole";
  std::size_t bins = 20, length = 30, count = 2000, folds = 5;
  double bound_c = 75.0, threshold = 1e-4;
  std::uint64_t rng_seed = 0;
  bool skip_wiener = false, skip_cycles = false;
  std::vector<std::string> names;

  auto* gen = app.add_subcommand("generate", "Breadth-first Pachner graph around a seed");
  gen->add_option("--seed", seed, "Seed isomorphism signature")->required();
  gen->add_option("--moves", moves, "23, 14, all, or a list such as 23,32")->capture_default_str();
  gen->add_option("--depth", depth, "Maximum number of moves from the seed")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--out", out, "Output directory")->required();
  add_common(gen, common);

  auto* ana = app.add_subcommand("analyze", "Network metrics of a graph file");
  ana->add_option("--graph", graph)->required()->check(CLI::ExistingFile);
  ana->add_option("--out", out)->required();
  ana->add_flag("--skip-wiener", skip_wiener, "Do not compute the Wiener index");
  ana->add_flag("--skip-cycle-basis", skip_cycles, "Do not compute the minimum cycle basis");

  auto* cen = app.add_subcommand("census", "Generate and summarise one graph per seed");
  cen->add_option("--seeds", seeds_file)->required()->check(CLI::ExistingFile);
  cen->add_option("--moves", moves)->capture_default_str();
  cen->add_option("--depth", depth)->required()->check(CLI::NonNegativeNumber);
  cen->add_option("--out", out)->required();
  add_common(cen, common);

  auto* cor = app.add_subcommand("correlate", "Graph size against a manifold invariant");
  cor->add_option("--summaries", summaries, "summaries.csv from census")->required()->check(CLI::ExistingFile);
  cor->add_option("--invariants", invariants, "CSV with isosig,volume,systole,cusps")->required()->check(CLI::ExistingFile);
  cor->add_option("--column", column, "Invariant column to use")->capture_default_str();
  cor->add_option("--bins", bins)->capture_default_str()->check(CLI::PositiveNumber);
  cor->add_option("--bound-c", bound_c, "c in the candidate bound c/sqrt(x)")->capture_default_str();
  cor->add_option("--out", out)->required();

  auto* len = app.add_subcommand("lengths", "Signature length histogram of a graph");
  len->add_option("--graph", graph)->required()->check(CLI::ExistingFile);

  auto* smp = app.add_subcommand("sample", "Uniform sample of fixed-length signatures");
  smp->add_option("--graph", graph)->required()->check(CLI::ExistingFile);
  smp->add_option("--length", length)->capture_default_str();
  smp->add_option("--count", count)->capture_default_str();
  smp->add_option("--rng-seed", rng_seed)->capture_default_str();
  smp->add_option("--out", out, "Output file")->required();

  auto* dat = app.add_subcommand("dataset", "Labelled binary dataset with stratified folds");
  dat->add_option("--class-a", class_a)->required()->check(CLI::ExistingFile);
  dat->add_option("--class-b", class_b)->required()->check(CLI::ExistingFile);
  dat->add_option("--length", length)->capture_default_str();
  dat->add_option("--rng-seed", rng_seed)->capture_default_str();
  dat->add_option("--folds", folds)->capture_default_str()->check(CLI::Range(2, 100));
  dat->add_option("--names", names, "Class names (two values)")->expected(2);
  dat->add_option("--out", out)->required();

  auto* trn = app.add_subcommand("train", "Cross-validated classifier training");
  trn->add_option("--dataset", dataset_dir)->required()->check(CLI::ExistingDirectory);
  trn->add_option("--config", config_file, "JSON object of MLPConfig fields")->check(CLI::ExistingFile);
  trn->add_option("--out", out)->required();
  add_common(trn, common);

  auto* sal = app.add_subcommand("saliency", "Gradient saliency of trained fold models");
  sal->add_option("--models", models_dir)->required()->check(CLI::ExistingDirectory);
  sal->add_option("--dataset", dataset_dir)->required()->check(CLI::ExistingDirectory);
  sal->add_option("--threshold", threshold)->capture_default_str();
  sal->add_option("--out", out)->required();

  auto* rt = app.add_subcommand("roundtrip", "Check encode(decode(s)) == s for every line");
  rt->add_option("--isosigs", isosigs)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kValidation;
  }

  try {
    if (*gen) return cmd_generate(seed, moves, depth, out, common);
    if (*ana) return cmd_analyze(graph, out, skip_wiener, skip_cycles);
    if (*cen) return cmd_census(seeds_file, moves, depth, out, common);
    if (*cor) return cmd_correlate(summaries, invariants, column, bins, bound_c, out);
    if (*len) return cmd_lengths(graph);
    if (*smp) return cmd_sample(graph, length, count, rng_seed, out);
    if (*dat) return cmd_dataset(class_a, class_b, length, rng_seed, folds, names, out);
    if (*trn) return cmd_train(dataset_dir, config_file, out, common.jobs);
    if (*sal) return cmd_saliency(models_dir, dataset_dir, out, threshold);
    if (*rt) return cmd_roundtrip(isosigs);
  } catch (const GraphBudgetExceeded& e) {
    report_error("budget", e.what(),
                 {{"completed_depth", e.completed_depth()}, {"partial_nodes", e.partial().node_count()}});
    return kBudget;
  } catch (const BudgetExceeded& e) {
    report_error("budget", e.what(), {{"completed_depth", e.completed_depth()}});
    return kBudget;
  } catch (const ParseError& e) {
    report_error("validation", e.what(), {{"position", e.position()}});
    return kValidation;
  } catch (const std::exception& e) {
    report_error("validation", e.what());
    return kValidation;
  }
  return kValidation;
}
