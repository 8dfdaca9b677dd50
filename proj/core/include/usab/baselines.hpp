#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "usab/matrix.hpp"
#include "usab/rng.hpp"

namespace usab {

struct KnnParams {
  std::size_t k = 5;
};
struct GaussianNbParams {};
struct TreeParams {
  std::size_t max_depth = 10;
};
struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 10;
};
struct LogRegParams {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
};

using BaselineKind = std::variant<KnnParams, GaussianNbParams, TreeParams, ForestParams, LogRegParams>;

/// "knn", "gaussian_nb", "tree", "forest" or "logreg".
std::string kind_name(const BaselineKind& kind);

/// Node of a CART tree stored in a flat vector. Leaves have feature == npos.
struct TreeNode {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t feature = npos;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<double> class_counts;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(std::span<const double> x) const;
  std::size_t predict(std::span<const double> x) const;
};

/// A fitted baseline. scores() returns one value per class (higher is more
/// likely); predict() is its argmax with ties to the lowest class id.
class BaselineModel {
 public:
  static BaselineModel train(const BaselineKind& kind, const Matrix& X,
                             std::span<const std::size_t> labels, std::size_t num_classes,
                             RngSpec rng);

  std::vector<double> scores(std::span<const double> x) const;
  std::size_t predict(std::span<const double> x) const;

  const BaselineKind& kind() const noexcept { return kind_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t dimension() const noexcept { return dimension_; }

  /// Trees of a tree or forest model (a tree model holds exactly one).
  const std::vector<DecisionTree>& trees() const;

  struct State;

 private:
  BaselineModel(BaselineKind kind, std::size_t num_classes, std::size_t dimension,
                std::shared_ptr<const State> state);

  BaselineKind kind_;
  std::size_t num_classes_ = 0;
  std::size_t dimension_ = 0;
  std::shared_ptr<const State> state_;
};

/// Grows one CART tree on the given rows: Gini splits at midpoints between
/// consecutive distinct values, ties to the lower feature index. When
/// features_per_split < D a fresh random subset is drawn at every node.
DecisionTree grow_tree(const Matrix& X, std::span<const std::size_t> labels, std::size_t num_classes,
                       std::span<const std::size_t> rows, std::size_t max_depth,
                       std::size_t features_per_split, Rng& rng);

double gini_impurity(std::span<const double> class_counts);

}  // namespace usab
