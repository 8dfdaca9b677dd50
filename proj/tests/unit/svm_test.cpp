#include <gtest/gtest.h>

#include <cmath>

#include "svm_oracles.hpp"
#include "usab/error.hpp"
#include "usab/rng.hpp"
#include "usab/svm.hpp"

namespace usab {
namespace {

SvmConfig linear(double C) {
  SvmConfig cfg;
  cfg.C = C;
  cfg.kernel = KernelSpec::linear();
  return cfg;
}

SvmConfig rbf(double C, double gamma) {
  SvmConfig cfg;
  cfg.C = C;
  cfg.kernel = KernelSpec::rbf(gamma);
  return cfg;
}

std::size_t training_hits(const SvmModel& m, const Matrix& X, const std::vector<int>& y) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < X.rows(); ++i) hits += m.predict(X.row(i)) == y[i] ? 1 : 0;
  return hits;
}

TEST(Kernel, Values) {
  const std::vector<double> x{1, 2}, z{3, 4};
  EXPECT_EQ(kernel_eval(KernelSpec::linear(), x, z), 11.0);
  EXPECT_EQ(kernel_eval(KernelSpec::rbf(0.7), x, x), 1.0);
  EXPECT_NEAR(kernel_eval(KernelSpec::rbf(1e-12), x, z), 1.0, 1e-10);
  EXPECT_DOUBLE_EQ(kernel_eval(KernelSpec::rbf(0.5), x, z), std::exp(-0.5 * 8.0));
  EXPECT_THROW(kernel_eval(KernelSpec::linear(), x, std::vector<double>{1}), Error);
}

TEST(Kernel, RejectsBadGamma) {
  EXPECT_THROW(KernelSpec::rbf(0.0).validate(), Error);
  EXPECT_THROW(KernelSpec::rbf(-1.0).validate(), Error);
  EXPECT_THROW(KernelSpec::rbf(std::nan("")).validate(), Error);
}

TEST(Kernel, GramIsSymmetricWithUnitDiagonal) {
  Rng rng(1);
  Matrix X(12, 3);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 3; ++j) X(i, j) = rng.uniform01();
  }
  const auto K = kernel_matrix(KernelSpec::rbf(2.0), X);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(K(i, i), 1.0);
    for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(K(i, j), K(j, i));
  }
}

TEST(Smo, TwoPointAnalyticOptimum) {
  const auto X = Matrix::from_rows({{-1.0}, {1.0}});
  const std::vector<int> y{-1, 1};
  const auto m = train_binary(X, y, linear(10.0), RngSpec{1});
  const auto a = m.alphas(2);
  EXPECT_NEAR(a[0], 0.5, 1e-6);
  EXPECT_NEAR(a[1], 0.5, 1e-6);
  EXPECT_NEAR(m.bias(), 0.0, 1e-6);
  EXPECT_NEAR(m.decision_function(std::vector<double>{0.0}), 0.0, 1e-6);
  EXPECT_NEAR(m.decision_function(std::vector<double>{0.3}), 0.3, 1e-6);
  EXPECT_NEAR(m.decision_function(std::vector<double>{1.0}), 1.0, 1e-3);
}

TEST(Smo, SeparableLinearSet) {
  Rng rng(2);
  Matrix X(20, 2);
  std::vector<int> y(20);
  for (std::size_t i = 0; i < 20; ++i) {
    const int label = i < 10 ? 1 : -1;
    X(i, 0) = rng.uniform(0.0, 1.0) + (label == 1 ? 1.5 : -1.5);
    X(i, 1) = rng.uniform(-1.0, 1.0);
    y[i] = label;
  }
  const auto m = train_binary(X, y, linear(100.0), RngSpec{3});
  EXPECT_EQ(training_hits(m, X, y), 20u);
}

TEST(Smo, XorWithRbf) {
  const auto X = Matrix::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const std::vector<int> y{-1, -1, 1, 1};
  const auto m = train_binary(X, y, rbf(10.0, 1.0), RngSpec{4});
  EXPECT_EQ(training_hits(m, X, y), 4u);
}

TEST(Smo, SatisfiesDualConstraintsAndKkt) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    Matrix X(30, 2);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < 30; ++i) {
      X(i, 0) = rng.uniform01();
      X(i, 1) = rng.uniform01();
      y[i] = X(i, 0) + 0.3 * rng.normal() > 0.5 ? 1 : -1;
    }
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), -1) == 0) continue;
    const auto cfg = rbf(2.0, 1.5);
    const auto m = train_binary(X, y, cfg, RngSpec{seed});
    for (double a : m.alphas(30)) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, cfg.C);
    }
    const auto kkt = testing::kkt_residual(m, X, y);
    EXPECT_LE(kkt.balance, cfg.tol);
    EXPECT_LE(kkt.worst, 10 * cfg.tol) << "seed " << seed;
  }
}

TEST(Smo, MatchesGridOracleOnTinyProblem) {
  const auto X = Matrix::from_rows({{0.1, 0.9}, {0.4, 0.2}, {0.8, 0.7}});
  const std::vector<int> y{1, -1, 1};
  const auto cfg = rbf(1.0, 1.0);
  const auto m = train_binary(X, y, cfg, RngSpec{5});
  const auto gram = kernel_matrix(cfg.kernel, X);
  const double smo = dual_objective(gram, y, m.alphas(3));
  const double grid = testing::grid_dual_optimum(gram, y, cfg.C, 0.01);
  EXPECT_NEAR(smo, grid, 1e-3);
}

TEST(Smo, IsDeterministicAndPermutationStable) {
  Rng rng(6);
  Matrix X(40, 2);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    X(i, 0) = rng.uniform01();
    X(i, 1) = rng.uniform01();
    y[i] = X(i, 0) > X(i, 1) ? 1 : -1;
  }
  const auto cfg = rbf(5.0, 2.0);
  const auto a = train_binary(X, y, cfg, RngSpec{9});
  const auto b = train_binary(X, y, cfg, RngSpec{9});
  EXPECT_EQ(a.alphas(40), b.alphas(40));
  EXPECT_EQ(a.bias(), b.bias());

  std::vector<std::size_t> perm(40);
  for (std::size_t i = 0; i < 40; ++i) perm[i] = 39 - i;
  std::vector<int> y2(40);
  for (std::size_t i = 0; i < 40; ++i) y2[i] = y[perm[i]];
  const auto c = train_binary(X.take_rows(perm), y2, cfg, RngSpec{9});
  Rng probe(7);
  std::size_t agree = 0;
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> x{probe.uniform01(), probe.uniform01()};
    agree += a.predict(x) == c.predict(x) ? 1 : 0;
  }
  EXPECT_GE(agree, 196u);
}

TEST(Smo, Errors) {
  const auto X = Matrix::from_rows({{0.0}, {1.0}});
  EXPECT_THROW(train_binary(X, std::vector<int>{1, 1}, linear(1.0), RngSpec{}), Error);
  try {
    train_binary(Matrix::from_rows({{0.0}, {NAN}}), std::vector<int>{1, -1}, linear(1.0), RngSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteFeature);
  }
  try {
    train_binary(X, std::vector<int>{1, 1}, linear(1.0), RngSpec{});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingleClassInput);
  }
}

TEST(SvmModel, DimensionMismatch) {
  const auto m = train_binary(Matrix::from_rows({{-1.0}, {1.0}}), std::vector<int>{-1, 1}, linear(10.0), RngSpec{});
  EXPECT_THROW(m.decision_function(std::vector<double>{1.0, 2.0}), Error);
}

TEST(Multiclass, BinaryCaseAgreesWithBinaryModel) {
  Rng rng(8);
  Matrix X(30, 2);
  Labels labels(30);
  std::vector<int> y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    X(i, 0) = rng.uniform01();
    X(i, 1) = rng.uniform01();
    labels[i] = X(i, 0) > 0.5 ? 0 : 1;
    y[i] = labels[i] == 0 ? 1 : -1;
  }
  const auto cfg = rbf(10.0, 1.0);
  const auto mc = train_multiclass(X, labels, 2, cfg, RngSpec{3});
  const auto bin = train_binary(X, y, cfg, substream(RngSpec{3}, 0));
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_EQ(mc.predict(X.row(i)) == 0, bin.predict(X.row(i)) == 1);
  }
}

TEST(Multiclass, SeparatedClusters) {
  Rng rng(9);
  const double centres[3][2] = {{0.15, 0.15}, {0.85, 0.2}, {0.5, 0.85}};
  Matrix X(90, 2);
  Labels labels(90);
  for (std::size_t i = 0; i < 90; ++i) {
    const std::size_t c = i % 3;
    X(i, 0) = centres[c][0] + 0.05 * rng.normal();
    X(i, 1) = centres[c][1] + 0.05 * rng.normal();
    labels[i] = c;
  }
  const auto m = train_multiclass(X, labels, 3, rbf(10.0, 2.0), RngSpec{1});
  std::size_t hits = 0;
  for (std::size_t i = 0; i < 90; ++i) hits += m.predict(X.row(i)) == labels[i] ? 1 : 0;
  EXPECT_GE(hits, 86u);
}

TEST(Multiclass, SingleClassFails) {
  const auto X = Matrix::from_rows({{0.0}, {1.0}});
  try {
    train_multiclass(X, Labels{1, 1}, 3, rbf(1.0, 1.0), RngSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingleClassInput);
  }
}

TEST(Multiclass, AbsentClassIsNeverPredicted) {
  const auto X = Matrix::from_rows({{0.0}, {0.1}, {0.9}, {1.0}});
  const auto m = train_multiclass(X, Labels{0, 0, 2, 2}, 3, rbf(1.0, 1.0), RngSpec{});
  EXPECT_FALSE(m.models()[1].has_value());
  for (double x = 0.0; x <= 1.0; x += 0.05) EXPECT_NE(m.predict(std::vector<double>{x}), 1u);
}

struct Xor {
  Matrix X;
  Labels labels;
};

Xor xor_task() {
  Rng rng(10);
  Xor t{Matrix(80, 2), Labels(80)};
  for (std::size_t i = 0; i < 80; ++i) {
    const int qx = static_cast<int>(i % 2), qy = static_cast<int>((i / 2) % 2);
    t.X(i, 0) = 0.25 + 0.5 * qx + rng.uniform(-0.15, 0.15);
    t.X(i, 1) = 0.25 + 0.5 * qy + rng.uniform(-0.15, 0.15);
    t.labels[i] = static_cast<std::size_t>(qx ^ qy);
  }
  return t;
}

TEST(GridSearch, SingleCellReturnsItself) {
  const auto t = xor_task();
  const std::vector<double> C{10.0}, g{1.0};
  const auto r = grid_search(t.X, t.labels, 2, C, g, 4, default_svm_config(2), RngSpec{1});
  ASSERT_EQ(r.table.size(), 1u);
  EXPECT_EQ(r.best.C, 10.0);
  EXPECT_EQ(r.best.kernel.gamma, 1.0);
  EXPECT_EQ(r.best_accuracy, r.table.front().accuracy);
}

TEST(GridSearch, KnownGoodBeatsDegenerateGamma) {
  const auto t = xor_task();
  const std::vector<double> C{10.0}, g{1e-9, 1.0};
  const auto r = grid_search(t.X, t.labels, 2, C, g, 4, default_svm_config(2), RngSpec{2});
  EXPECT_EQ(r.best.kernel.gamma, 1.0);
  EXPECT_GE(r.best_accuracy, 0.9);
}

TEST(GridSearch, DuplicatesAreIgnored) {
  const auto t = xor_task();
  const std::vector<double> C{1.0, 10.0}, g{1.0, 4.0};
  const std::vector<double> C2{10.0, 1.0, 10.0}, g2{4.0, 1.0, 1.0};
  const auto a = grid_search(t.X, t.labels, 2, C, g, 4, default_svm_config(2), RngSpec{3});
  const auto b = grid_search(t.X, t.labels, 2, C2, g2, 4, default_svm_config(2), RngSpec{3});
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best_accuracy, b.best_accuracy);
  EXPECT_EQ(b.table.size(), 4u);
}

TEST(GridSearch, EmptyGridFails) {
  const auto t = xor_task();
  try {
    grid_search(t.X, t.labels, 2, std::vector<double>{}, std::vector<double>{1.0}, 4, default_svm_config(2),
                RngSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGrid);
  }
}

TEST(RandomSearch, DegenerateRangeMatchesSingleCellGrid) {
  const auto t = xor_task();
  const auto r = random_search(t.X, t.labels, 2, {10.0, 10.0}, {1.0, 1.0}, 1, 4, default_svm_config(2), RngSpec{4});
  const std::vector<double> C{10.0}, g{1.0};
  const auto gr = grid_search(t.X, t.labels, 2, C, g, 4, default_svm_config(2), RngSpec{4});
  EXPECT_EQ(r.best, gr.best);
  EXPECT_EQ(r.best_accuracy, gr.best_accuracy);
}

TEST(RandomSearch, CompetitiveWithGrid) {
  const auto t = xor_task();
  const std::vector<double> C{0.1, 1.0, 10.0, 100.0}, g{0.1, 1.0, 10.0};
  const auto gr = grid_search(t.X, t.labels, 2, C, g, 4, default_svm_config(2), RngSpec{5});
  const auto rs = random_search(t.X, t.labels, 2, {0.1, 100.0}, {0.1, 10.0}, 30, 4, default_svm_config(2), RngSpec{5});
  EXPECT_EQ(rs.table.size(), 30u);
  EXPECT_GE(rs.best_accuracy, gr.best_accuracy - 0.05);
}

TEST(RandomSearch, InvalidRange) {
  const auto t = xor_task();
  try {
    random_search(t.X, t.labels, 2, {10.0, 1.0}, {1.0, 1.0}, 3, 4, default_svm_config(2), RngSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidRange);
  }
}

TEST(SvmConfig, Defaults) {
  const auto cfg = default_svm_config(4);
  EXPECT_EQ(cfg.C, 1.0);
  EXPECT_EQ(cfg.kernel.kind, KernelKind::rbf);
  EXPECT_EQ(cfg.kernel.gamma, 0.25);
  EXPECT_EQ(cfg.tol, 1e-3);
  EXPECT_EQ(cfg.max_passes, 100u);
}

}  // namespace
}  // namespace usab
