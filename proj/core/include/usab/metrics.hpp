#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usab/matrix.hpp"

namespace usab {

/// K x K counts with rows = predicted class and columns = true class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> class_names);
  ConfusionMatrix(std::vector<std::string> class_names, std::vector<std::vector<std::uint64_t>> counts);

  std::size_t num_classes() const noexcept { return class_names_.size(); }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  std::uint64_t at(std::size_t predicted, std::size_t truth) const {
    return counts_[predicted * num_classes() + truth];
  }
  void add(std::size_t predicted, std::size_t truth, std::uint64_t count = 1);

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t predicted) const;
  std::uint64_t col_sum(std::size_t truth) const;

  /// Element-wise sum; class names must match.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::string> class_names_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::vector<std::string> class_names);

/// Per-sample decision scores (one column per class) with the true labels.
struct ScoredPredictions {
  Matrix scores;
  Labels truth;
};

/// Ratios with a zero denominator are absent rather than zero.
struct MetricsReport {
  double accuracy = 0.0;
  std::vector<std::optional<double>> precision;    // per predicted row
  std::vector<std::optional<double>> recall;       // per true column
  std::vector<std::optional<double>> specificity;  // one-vs-rest true negative rate
  std::optional<double> macro_precision;
  std::optional<double> macro_recall;
  std::vector<std::optional<double>> auc;  // one-vs-rest; empty without scores
  std::optional<double> macro_auc;
};

MetricsReport metrics(const ConfusionMatrix& cm, const ScoredPredictions* scores = nullptr);

/// Area under the ROC curve by the trapezoidal rule. Tied scores form one
/// diagonal ROC segment. Absent when either class is empty.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const bool> positive);

}  // namespace usab
