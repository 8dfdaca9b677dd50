#include <gtest/gtest.h>

#include <cmath>

#include "reference_data.hpp"
#include "usab/error.hpp"
#include "usab/metrics.hpp"
#include "usab/rng.hpp"

namespace usab {
namespace {

double round2(double pct) { return std::round(pct * 100.0) / 100.0; }

TEST(Confusion, DiagonalWhenAllCorrect) {
  const Labels truth{0, 1, 2, 1};
  const auto cm = confusion(truth, truth, {"a", "b", "c"});
  EXPECT_EQ(cm.trace(), 4u);
  EXPECT_EQ(cm.at(1, 1), 2u);
  EXPECT_EQ(cm.at(0, 1), 0u);
}

TEST(Confusion, RowsArePredictions) {
  const auto cm = confusion(Labels{1}, Labels{0}, {"a", "b"});
  EXPECT_EQ(cm.at(1, 0), 1u);
  EXPECT_EQ(cm.at(0, 1), 0u);
}

TEST(Confusion, RebuildsPublishedMatrixFromPairs) {
  const auto ref = ref::published_confusion();
  Labels pred, truth;
  for (std::size_t p = 0; p < 6; ++p) {
    for (std::size_t t = 0; t < 6; ++t) {
      for (std::uint64_t k = 0; k < ref.at(p, t); ++k) {
        pred.push_back(p);
        truth.push_back(t);
      }
    }
  }
  ASSERT_EQ(pred.size(), 147u);
  EXPECT_EQ(confusion(pred, truth, ref::kConfusionClasses), ref);
}

TEST(Confusion, Errors) {
  try {
    confusion(Labels{}, Labels{}, {"a"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
  EXPECT_THROW(confusion(Labels{0, 1}, Labels{0}, {"a", "b"}), Error);
  try {
    confusion(Labels{3}, Labels{0}, {"a", "b"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownClass);
  }
}

TEST(Metrics, PublishedMatrix) {
  const auto m = metrics(ref::published_confusion());
  EXPECT_NEAR(100.0 * m.accuracy, 100.0 * 143.0 / 147.0, 0.005);
  EXPECT_EQ(round2(100.0 * m.accuracy), 97.28);
  for (std::size_t c = 0; c < 6; ++c) {
    EXPECT_EQ(round2(100.0 * *m.precision[c]), ref::kPrecisionPct[c]) << c;
    EXPECT_EQ(round2(100.0 * *m.recall[c]), ref::kRecallPct[c]) << c;
  }
  EXPECT_DOUBLE_EQ(*m.precision[0], 22.0 / 24.0);
  EXPECT_DOUBLE_EQ(*m.recall[3], 26.0 / 28.0);
}

TEST(Metrics, IdentityIsPerfect) {
  ConfusionMatrix cm({"a", "b", "c"}, {{3, 0, 0}, {0, 4, 0}, {0, 0, 5}});
  const auto m = metrics(cm);
  EXPECT_EQ(m.accuracy, 1.0);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(*m.precision[c], 1.0);
    EXPECT_EQ(*m.recall[c], 1.0);
    EXPECT_EQ(*m.specificity[c], 1.0);
  }
  EXPECT_EQ(*m.macro_precision, 1.0);
}

TEST(Metrics, UndefinedRatiosAreAbsent) {
  ConfusionMatrix cm({"a", "b"}, {{2, 1}, {0, 0}});
  const auto m = metrics(cm);
  EXPECT_FALSE(m.precision[1].has_value());
  EXPECT_TRUE(m.recall[1].has_value());
  EXPECT_EQ(*m.recall[1], 0.0);
  EXPECT_EQ(*m.macro_precision, *m.precision[0]);
}

TEST(Metrics, EmptyMatrixFails) {
  try {
    metrics(ConfusionMatrix({"a", "b"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMatrix);
  }
}

TEST(Metrics, NumeratorsSumToTrace) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.index(5);
    std::vector<std::vector<std::uint64_t>> counts(k, std::vector<std::uint64_t>(k));
    for (auto& row : counts) {
      for (auto& v : row) v = rng.index(20);
    }
    counts[0][0] += 1;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < k; ++c) names.push_back("c" + std::to_string(c));
    const ConfusionMatrix cm(names, counts);
    const auto m = metrics(cm);
    double numerators = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (m.precision[c]) numerators += *m.precision[c] * static_cast<double>(cm.row_sum(c));
    }
    EXPECT_NEAR(numerators, m.accuracy * static_cast<double>(cm.total()), 1e-9);
  }
}

TEST(Metrics, MergeBySummation) {
  ConfusionMatrix a({"x", "y"}, {{1, 2}, {3, 4}});
  const ConfusionMatrix b({"x", "y"}, {{4, 3}, {2, 1}});
  a += b;
  EXPECT_EQ(a, ConfusionMatrix({"x", "y"}, {{5, 5}, {5, 5}}));
}

TEST(Auc, PerfectRanking) {
  const std::vector<double> s{0.1, 0.2, 0.8, 0.9};
  const bool pos[] = {false, false, true, true};
  EXPECT_EQ(*roc_auc(s, pos), 1.0);
}

TEST(Auc, TiesCountHalf) {
  const std::vector<double> s{0.5, 0.5};
  const bool pos[] = {false, true};
  EXPECT_EQ(*roc_auc(s, pos), 0.5);
}

TEST(Auc, AbsentWithOneClass) {
  const std::vector<double> s{0.5, 0.7};
  const bool pos[] = {true, true};
  EXPECT_FALSE(roc_auc(s, pos).has_value());
}

TEST(Auc, MatchesPairwiseDefinition) {
  Rng rng(2);
  std::vector<double> s(200);
  bool pos[200];
  for (std::size_t i = 0; i < 200; ++i) {
    pos[i] = rng.bernoulli(0.4);
    s[i] = std::round((rng.uniform01() + (pos[i] ? 0.3 : 0.0)) * 20.0) / 20.0;
  }
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    for (std::size_t j = 0; j < 200; ++j) {
      if (!pos[i] || pos[j]) continue;
      pairs += 1.0;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  EXPECT_NEAR(*roc_auc(s, pos), wins / pairs, 1e-12);
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  Rng rng(3);
  std::vector<double> s(100), t(100);
  bool pos[100];
  for (std::size_t i = 0; i < 100; ++i) {
    pos[i] = rng.bernoulli(0.5);
    s[i] = rng.normal() + (pos[i] ? 1.0 : 0.0);
    t[i] = std::exp(3.0 * s[i]) + 7.0;
  }
  EXPECT_DOUBLE_EQ(*roc_auc(s, pos), *roc_auc(t, pos));
}

TEST(Metrics, AucFromScores) {
  ConfusionMatrix cm({"a", "b"}, {{2, 0}, {0, 2}});
  ScoredPredictions sp{Matrix::from_rows({{0.9, 0.1}, {0.8, 0.2}, {0.3, 0.7}, {0.1, 0.9}}), {0, 0, 1, 1}};
  const auto m = metrics(cm, &sp);
  ASSERT_EQ(m.auc.size(), 2u);
  EXPECT_EQ(*m.auc[0], 1.0);
  EXPECT_EQ(*m.macro_auc, 1.0);
}

}  // namespace
}  // namespace usab
