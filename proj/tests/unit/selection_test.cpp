#include <gtest/gtest.h>

#include "tasks.hpp"
#include "usab/error.hpp"
#include "usab/selection.hpp"

namespace usab {
namespace {

SvmConfig linear_svm() {
  SvmConfig cfg = default_svm_config(1);
  cfg.kernel = KernelSpec::linear();
  cfg.C = 10.0;
  return cfg;
}

TEST(Mask, Basics) {
  const auto m = FeatureMask::from_chromosome({{1, 0, 1, 0}, std::nullopt});
  EXPECT_EQ(m.popcount(), 2u);
  EXPECT_EQ(m.indices(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(m.to_string(), "1010");
  EXPECT_EQ(FeatureMask::full(3).to_string(), "111");
  EXPECT_EQ(FeatureMask::single(3, 1).to_string(), "010");
}

TEST(MaskFitness, SeparableTaskIsPerfect) {
  const auto fm = testing::blobs(20, 2, 1);
  EXPECT_EQ(mask_fitness(FeatureMask::full(2), fm, linear_svm(), 5, RngSpec{1}), 1.0);
}

TEST(MaskFitness, FullPenaltyCancelsPerfectAccuracy) {
  const auto fm = testing::blobs(20, 2, 1);
  EXPECT_EQ(mask_fitness(FeatureMask::full(2), fm, linear_svm(), 5, RngSpec{1}, 1.0), 0.0);
}

TEST(MaskFitness, ConstantFeatureIsChance) {
  auto fm = testing::blobs(30, 2, 2);
  for (std::size_t i = 0; i < fm.rows(); ++i) fm.values(i, 1) = 0.5;
  const double acc = mask_fitness(FeatureMask::single(2, 1), fm, linear_svm(), 5, RngSpec{2});
  EXPECT_NEAR(acc, 0.5, 0.1);
}

TEST(MaskFitness, Errors) {
  const auto fm = testing::blobs(10, 2, 3);
  try {
    mask_fitness(FeatureMask{{false, false}}, fm, linear_svm(), 5, RngSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMask);
  }
  try {
    mask_fitness(FeatureMask::full(3), fm, linear_svm(), 5, RngSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Select, NeedsTwoFeatures) {
  const auto fm = testing::blobs(10, 1, 4);
  EXPECT_THROW(select_features(fm, linear_svm(), default_selection_ga(1), {}, RngSpec{}), Error);
}

TEST(Select, FindsInformativeFeatures) {
  const auto fm = testing::threshold_task(120, 2, 3, 5);
  const auto r = select_features(fm, linear_svm(), default_selection_ga(5), {}, RngSpec{5});
  EXPECT_EQ(r.best_mask.size(), 5u);
  EXPECT_TRUE(r.best_mask.bits[0]);
  EXPECT_TRUE(r.best_mask.bits[1]);
  EXPECT_GE(r.cv_accuracy, 0.85);
  EXPECT_EQ(r.fitness, r.cv_accuracy);
  EXPECT_EQ(r.cv_accuracy, mask_fitness(r.best_mask, fm, linear_svm(), 5, selection_cv_stream(RngSpec{5})));
  EXPECT_GE(r.masks_evaluated, 6u);
  ASSERT_EQ(r.per_feature_frequency.size(), 5u);
  for (double f : r.per_feature_frequency) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(Select, PenaltyPrefersSmallerMasks) {
  const auto fm = testing::threshold_task(120, 1, 3, 6);
  SelectionOptions opts;
  opts.lambda = 0.2;
  const auto r = select_features(fm, linear_svm(), default_selection_ga(4), opts, RngSpec{6});
  EXPECT_EQ(r.best_mask.to_string(), "1000");
  EXPECT_LT(r.fitness, r.cv_accuracy);
}

TEST(Select, Deterministic) {
  const auto fm = testing::threshold_task(80, 2, 2, 7);
  auto ga = default_selection_ga(4);
  ga.max_generations = 4;
  const auto a = select_features(fm, linear_svm(), ga, {}, RngSpec{7});
  const auto b = select_features(fm, linear_svm(), ga, {}, RngSpec{7});
  EXPECT_EQ(a.best_mask, b.best_mask);
  EXPECT_EQ(a.per_feature_frequency, b.per_feature_frequency);
  EXPECT_EQ(a.masks_evaluated, b.masks_evaluated);
}

TEST(SelectionReport, OrderedByScoreThenName) {
  SelectionResult r;
  r.best_mask = FeatureMask{{true, false, true}};
  r.per_feature_frequency = {0.9, 0.1, 0.5};
  const FeatureScoreTable scores{{{"a", 0.2}, {"b", 0.7}, {"c", 0.2}}};
  const auto rows = selection_report(r, {"a", "b", "c"}, scores);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].feature, "b");
  EXPECT_FALSE(rows[0].selected);
  EXPECT_EQ(rows[1].feature, "a");
  EXPECT_EQ(rows[1].frequency, 0.9);
  EXPECT_EQ(rows[2].feature, "c");
  EXPECT_TRUE(rows[2].selected);
}

TEST(SelectionReport, UniverseMismatch) {
  SelectionResult r;
  r.best_mask = FeatureMask::full(2);
  r.per_feature_frequency = {1.0, 1.0};
  const FeatureScoreTable scores{{{"a", 0.2}, {"z", 0.7}}};
  try {
    selection_report(r, {"a", "b"}, scores);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FeatureUniverseMismatch);
  }
}

}  // namespace
}  // namespace usab
