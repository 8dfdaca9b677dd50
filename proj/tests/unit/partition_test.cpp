#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "usab/error.hpp"
#include "usab/partition.hpp"

namespace usab {
namespace {

Labels cycling(std::size_t n, std::size_t k) {
  Labels l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = i % k;
  return l;
}

TEST(Split, SizesFloorThenRemainder) {
  const auto parts = split_indices(cycling(10, 2), {0.7, RngSpec{1}, false});
  EXPECT_EQ(parts.train.size(), 7u);
  EXPECT_EQ(parts.test.size(), 3u);
}

TEST(Split, DisjointAndExhaustive) {
  const auto parts = split_indices(cycling(57, 3), {0.7, RngSpec{2}, true});
  std::vector<std::size_t> all = parts.train;
  all.insert(all.end(), parts.test.begin(), parts.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
}

TEST(Split, SameSeedSamePartition) {
  const auto a = split_indices(cycling(40, 4), {0.7, RngSpec{3}, true});
  const auto b = split_indices(cycling(40, 4), {0.7, RngSpec{3}, true});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
}

TEST(Split, StratifiedKeepsProportions) {
  Labels labels(100, 0);
  std::fill(labels.begin() + 70, labels.end(), 1);
  const auto parts = split_indices(labels, {0.7, RngSpec{4}, true});
  const auto ones = std::count_if(parts.train.begin(), parts.train.end(), [&](std::size_t i) { return labels[i] == 1; });
  EXPECT_NEAR(static_cast<double>(ones), 0.7 * 30, 1.0);
}

TEST(Split, Errors) {
  try {
    split_indices(Labels{0}, {0.7, RngSpec{}, false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSamples);
  }
  try {
    split_indices(Labels{0, 0, 0, 1}, {0.5, RngSpec{}, true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ClassTooSmall);
  }
}

TEST(Split, FeatureMatrixView) {
  FeatureMatrix fm{Matrix(10, 2, 0.5), cycling(10, 2), {"a", "b"}, {"x", "y"}};
  const auto [train, test] = split(fm, {0.7, RngSpec{5}, true});
  EXPECT_EQ(train.rows(), 7u);
  EXPECT_EQ(test.rows(), 3u);
  EXPECT_EQ(train.feature_names, fm.feature_names);
}

TEST(KFold, SingletonFolds) {
  const auto folds = kfold(cycling(10, 2), 10, {0.7, RngSpec{6}, true});
  ASSERT_EQ(folds.size(), 10u);
  for (const auto& f : folds) {
    EXPECT_EQ(f.test.size(), 1u);
    EXPECT_EQ(f.train.size(), 9u);
  }
}

TEST(KFold, UnevenSizes) {
  const auto folds = kfold(cycling(10, 1), 3, {0.7, RngSpec{7}, false});
  std::vector<std::size_t> sizes;
  for (const auto& f : folds) sizes.push_back(f.test.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 4}));
}

TEST(KFold, PartitionPropertyAcrossShapes) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 10 + rng.index(491);
    const std::size_t k = 2 + rng.index(9);
    const std::size_t classes = 1 + rng.index(6);
    Labels labels(n);
    for (auto& l : labels) l = rng.index(classes);
    const bool stratified = rng.bernoulli(0.5);
    const auto folds = kfold(labels, k, {0.7, RngSpec{static_cast<std::uint64_t>(trial)}, stratified});
    std::vector<int> hit(n, 0);
    std::size_t lo = n, hi = 0;
    for (const auto& f : folds) {
      for (std::size_t i : f.test) ++hit[i];
      lo = std::min(lo, f.test.size());
      hi = std::max(hi, f.test.size());
      EXPECT_EQ(f.train.size() + f.test.size(), n);
    }
    EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(KFold, TooFewSamples) {
  try {
    kfold(cycling(3, 1), 5, {0.7, RngSpec{}, true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSamples);
  }
}

}  // namespace
}  // namespace usab
