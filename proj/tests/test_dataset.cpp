#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include "pachner/dataset.hpp"
#include "pachner/graph.hpp"

using namespace pachner;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pachner_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

std::vector<std::string> fake_sigs(char lead, std::size_t n, std::size_t len) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s(len, lead);
    for (std::size_t k = 1; k < len; ++k) s[k] = kAlphabet[(i >> (3 * (k - 1))) % 8];
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Rng, DeterministicAndIndependentStreams) {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.engine()(), b.engine()());
  EXPECT_NE(Rng(42).split("x").engine()(), Rng(42).split("y").engine()());
  EXPECT_NE(Rng(42).split(std::uint64_t{0}).seed(), Rng(42).split(std::uint64_t{1}).seed());
  Rng r(1);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[r.below(5)];
  for (int h : hits) EXPECT_NEAR(h, 1000, 150);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Dataset, LengthHistogram) {
  const auto g = generate("cMcabbgqs", MoveSet::bistellar23(), 0);
  EXPECT_EQ(length_histogram(g), (std::map<std::size_t, std::size_t>{{9, 1}}));
  const auto big = generate("cMcabbgqs", MoveSet::bistellar23(), 4);
  std::size_t total = 0;
  for (auto [len, c] : length_histogram(big)) {
    total += c;
    EXPECT_TRUE(len == 9 || len == 11 || len == 14 || len == 17 || len == 19) << len;
  }
  EXPECT_EQ(total, big.node_count());
}

TEST(Dataset, SampleFixedLength) {
  std::vector<std::string> pool = fake_sigs('k', 391, 6);
  pool.push_back("short");
  const auto s = sample_fixed_length(pool, 6, 2000, 1);
  EXPECT_EQ(s.size(), 391u);
  EXPECT_EQ(std::set<std::string>(s.begin(), s.end()).size(), 391u);
  EXPECT_TRUE(sample_fixed_length(pool, 6, 0, 1).empty());
  EXPECT_EQ(sample_fixed_length(pool, 6, 10, 5), sample_fixed_length(pool, 6, 10, 5));
  EXPECT_NE(sample_fixed_length(pool, 6, 10, 5), sample_fixed_length(pool, 6, 10, 6));
  EXPECT_THROW(sample_fixed_length(pool, 30, 10, 1), Error);
}

TEST(Dataset, OneHot) {
  const auto a = one_hot("a", 1);
  ASSERT_EQ(a.size(), 64u);
  EXPECT_EQ(a[0], 1);
  EXPECT_EQ(std::count(a.begin(), a.end(), 1), 1);
  EXPECT_THROW(one_hot("a", 2), Error);
  EXPECT_THROW(one_hot("a*", 2), Error);

  const std::string sig = "jLvAzQQcfeghighiiuquanobwwrab+-";
  const std::string s30 = sig.substr(0, 30);
  const auto v = one_hot(s30, 30);
  EXPECT_EQ(v.size(), 1920u);
  EXPECT_EQ(std::count(v.begin(), v.end(), 1), 30);
  for (std::size_t b = 0; b < 30; ++b) EXPECT_EQ(v[64 * b + alphabet_value(s30[b])], 1);
  EXPECT_EQ(one_hot_decode(v), s30);
}

TEST(Dataset, StratifiedFolds) {
  const auto a = fake_sigs('c', 103, 5), b = fake_sigs('d', 57, 5);
  const auto ds = build_binary_dataset(a, b, 5, 9, 5, {"x", "y"});
  EXPECT_EQ(ds.samples.size(), 160u);
  std::vector<int> seen(ds.samples.size(), 0);
  for (const auto& f : ds.folds) {
    std::size_t ones = 0;
    for (std::size_t i : f) {
      ++seen[i];
      ones += ds.samples[i].label;
    }
    const double expected = 57.0 / 160.0 * static_cast<double>(f.size());
    EXPECT_LE(std::abs(static_cast<double>(ones) - expected), 1.0);
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_EQ(build_binary_dataset(a, b, 5, 9), build_binary_dataset(a, b, 5, 9));
  EXPECT_THROW(build_binary_dataset(a, {}, 5, 9), Error);
  EXPECT_THROW(build_binary_dataset(a, {"dddd"}, 5, 9), Error);
}

TEST(Dataset, WriteReadRoundTrip) {
  const auto ds = build_binary_dataset(fake_sigs('c', 20, 4), fake_sigs('d', 20, 4), 4, 3, 4, {"S3", "T3"});
  const auto dir = temp_dir("dataset");
  write_dataset(ds, dir);
  EXPECT_EQ(read_dataset(dir), ds);

  // A broken partition is refused.
  std::ofstream(dir / "folds.json") << R"({"seed":3,"length":4,"class_names":["S3","T3"],"folds":[[0,1],[1]]})";
  EXPECT_THROW(read_dataset(dir), Error);
  std::filesystem::remove_all(dir);
}
