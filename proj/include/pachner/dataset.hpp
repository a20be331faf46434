#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pachner/error.hpp"
#include "pachner/graph.hpp"
#include "pachner/isosig.hpp"

namespace pachner {

/// Seedable generator whose child streams are derived by name, so adding a
/// consumer never shifts the numbers drawn by another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }

  Rng split(std::string_view name) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : name) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return Rng(mix(seed_ ^ h));
  }

  Rng split(std::uint64_t index) const { return Rng(mix(seed_ + 0x9e3779b97f4a7c15ULL * (index + 1))); }

  template <class It>
  void shuffle(It first, It last) {
    // Fisher-Yates with explicit draws; std::shuffle is not portable across standard libraries.
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const std::uint64_t j = below(i);
      std::iter_swap(first + (i - 1), first + j);
    }
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finaliser
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline std::map<std::size_t, std::size_t> length_histogram(const std::vector<std::string>& sigs) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& s : sigs) ++h[s.size()];
  return h;
}

inline std::map<std::size_t, std::size_t> length_histogram(const PachnerGraph& g) { return length_histogram(g.nodes); }

/// Uniform sample without replacement of min(k, available) signatures of length L.
inline std::vector<std::string> sample_fixed_length(const std::vector<std::string>& sigs, std::size_t length,
                                                    std::size_t k, std::uint64_t seed) {
  std::vector<std::string> pool;
  std::unordered_set<std::string_view> seen;
  for (const auto& s : sigs)
    if (s.size() == length && seen.insert(s).second) pool.push_back(s);
  if (pool.empty()) throw Error("sample_fixed_length: no signatures of length " + std::to_string(length));
  Rng rng = Rng(seed).split("sample");
  rng.shuffle(pool.begin(), pool.end());
  pool.resize(std::min(k, pool.size()));
  return pool;
}

inline std::vector<std::string> sample_fixed_length(const PachnerGraph& g, std::size_t length, std::size_t k,
                                                    std::uint64_t seed) {
  return sample_fixed_length(g.nodes, length, k, seed);
}

inline constexpr std::size_t kAlphabetSize = 64;

/// Positions of the ones in the one-hot code: block b holds character b.
inline std::vector<std::uint32_t> one_hot_indices(std::string_view sig, std::size_t length) {
  if (sig.size() != length)
    throw Error("one_hot: expected length " + std::to_string(length) + ", got " + std::to_string(sig.size()));
  std::vector<std::uint32_t> idx(length);
  for (std::size_t b = 0; b < length; ++b) {
    const int v = alphabet_value(sig[b]);
    if (v < 0) throw Error(std::string("one_hot: '") + sig[b] + "' is not in the alphabet");
    idx[b] = static_cast<std::uint32_t>(kAlphabetSize * b + v);
  }
  return idx;
}

inline std::vector<std::uint8_t> one_hot(std::string_view sig, std::size_t length) {
  std::vector<std::uint8_t> v(kAlphabetSize * length, 0);
  for (std::uint32_t i : one_hot_indices(sig, length)) v[i] = 1;
  return v;
}

inline std::string one_hot_decode(const std::vector<std::uint8_t>& v) {
  if (v.size() % kAlphabetSize != 0) throw Error("one_hot_decode: size is not a multiple of 64");
  std::string out;
  for (std::size_t b = 0; b < v.size() / kAlphabetSize; ++b) {
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(b * kAlphabetSize);
    out.push_back(kAlphabet[std::max_element(first, first + kAlphabetSize) - first]);
  }
  return out;
}

struct Sample {
  std::string isosig;
  int label = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct BinaryDataset {
  std::size_t length = 0;
  std::uint64_t seed = 0;
  std::array<std::string, 2> class_names{"a", "b"};
  std::vector<Sample> samples;
  std::vector<std::vector<std::size_t>> folds;

  std::size_t input_dim() const { return kAlphabetSize * length; }

  friend bool operator==(const BinaryDataset&, const BinaryDataset&) = default;
};

/// Labels class A as 0 and class B as 1, shuffles, and deals each class
/// round-robin into `k` folds so every fold mirrors the class balance.
inline BinaryDataset build_binary_dataset(const std::vector<std::string>& class_a, const std::vector<std::string>& class_b,
                                          std::size_t length, std::uint64_t seed, std::size_t k = 5,
                                          std::array<std::string, 2> names = {"a", "b"}) {
  if (class_a.empty() || class_b.empty()) throw Error("build_binary_dataset: both classes need samples");
  if (k == 0) throw Error("build_binary_dataset: fold count must be positive");
  BinaryDataset ds;
  ds.length = length;
  ds.seed = seed;
  ds.class_names = std::move(names);
  for (int label = 0; label < 2; ++label)
    for (const auto& s : label == 0 ? class_a : class_b) {
      one_hot_indices(s, length);  // validates
      ds.samples.push_back({s, label});
    }
  Rng rng(seed);
  Rng order = rng.split("order");
  order.shuffle(ds.samples.begin(), ds.samples.end());

  ds.folds.assign(k, {});
  std::size_t next = 0;
  for (int label = 0; label < 2; ++label)
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
      if (ds.samples[i].label == label) ds.folds[next++ % k].push_back(i);
  for (auto& f : ds.folds) std::sort(f.begin(), f.end());
  return ds;
}

inline void write_dataset(const BinaryDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "dataset.csv");
    if (!out) throw Error("write_dataset: cannot open " + (dir / "dataset.csv").string());
    out << "isosig,label\n";
    for (const auto& s : ds.samples) out << s.isosig << ',' << s.label << '\n';
  }
  nlohmann::json j;
  j["seed"] = ds.seed;
  j["length"] = ds.length;
  j["class_names"] = ds.class_names;
  j["folds"] = ds.folds;
  std::ofstream out(dir / "folds.json");
  if (!out) throw Error("write_dataset: cannot open " + (dir / "folds.json").string());
  out << j.dump(2) << '\n';
}

inline BinaryDataset read_dataset(const std::filesystem::path& dir) {
  BinaryDataset ds;
  std::ifstream meta(dir / "folds.json");
  if (!meta) throw Error("read_dataset: cannot open " + (dir / "folds.json").string());
  nlohmann::json j;
  try {
    meta >> j;
    ds.seed = j.at("seed").get<std::uint64_t>();
    ds.length = j.at("length").get<std::size_t>();
    ds.class_names = j.at("class_names").get<std::array<std::string, 2>>();
    ds.folds = j.at("folds").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("read_dataset: bad folds.json: ") + e.what());
  }

  std::ifstream in(dir / "dataset.csv");
  if (!in) throw Error("read_dataset: cannot open " + (dir / "dataset.csv").string());
  std::string line;
  if (!std::getline(in, line) || line != "isosig,label") throw Error("read_dataset: missing CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("read_dataset: malformed row '" + line + "'");
    Sample s{line.substr(0, comma), 0};
    const std::string lab = line.substr(comma + 1);
    if (lab != "0" && lab != "1") throw Error("read_dataset: bad label '" + lab + "'");
    s.label = lab[0] - '0';
    one_hot_indices(s.isosig, ds.length);
    ds.samples.push_back(std::move(s));
  }
  std::vector<int> hit(ds.samples.size(), 0);
  for (const auto& f : ds.folds)
    for (std::size_t i : f) {
      if (i >= hit.size() || hit[i]++) throw Error("read_dataset: folds do not partition the samples");
    }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) throw Error("read_dataset: folds do not cover every sample");
  return ds;
}

}  // namespace pachner
