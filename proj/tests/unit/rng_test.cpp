#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "usab/rng.hpp"

namespace usab {
namespace {

TEST(Rng, StreamsAreReproducible) {
  Rng a = Rng::stream(RngSpec{42}, 3, 4);
  Rng b = Rng::stream(RngSpec{42}, 3, 4);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, DistinctCoordinatesGiveDistinctStreams) {
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 1), derive_seed(1, 1, 0));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(2, 2, 3));
}

TEST(Rng, Uniform01StaysInHalfOpenInterval) {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, IndexCoversRange) {
  Rng r(9);
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.index(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, IntegerIsInclusive) {
  Rng r(11);
  int lo = 100, hi = -100;
  for (int i = 0; i < 5000; ++i) {
    const int v = r.integer(0, 30);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_EQ(lo, 0);
  EXPECT_EQ(hi, 30);
}

TEST(Rng, SampleWithoutReplacementIsDistinct) {
  Rng r(5);
  auto s = r.sample_without_replacement(50, 20);
  ASSERT_EQ(s.size(), 20u);
  std::sort(s.begin(), s.end());
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  EXPECT_LT(s.back(), 50u);
}

TEST(Rng, NormalHasRoughlyUnitMoments) {
  Rng r(3);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal();
    sum += v;
    sq += v * v;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.03);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(Rng, ShufflePermutes) {
  Rng r(1);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  auto w = v;
  r.shuffle(w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

}  // namespace
}  // namespace usab
