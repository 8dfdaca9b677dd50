#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usab/classifier.hpp"
#include "usab/evaluation.hpp"

namespace usab {

struct ComparisonRow {
  std::string model;
  double accuracy = 0.0;
  std::optional<double> macro_precision;
  std::optional<double> macro_recall;
  std::optional<double> macro_auc;
};

struct ComparisonTable {
  /// Sorted by accuracy, best first; equal accuracies keep input order.
  std::vector<ComparisonRow> rows;

  /// `model,accuracy,macro_precision,macro_recall,macro_auc`; absent values are empty cells.
  void write_csv(std::ostream& out) const;
};

/// Every model sees the same stratified folds and the same rng.
ComparisonTable compare_models(std::span<const ModelSpec> models, const FeatureMatrix& fm,
                               std::size_t folds, RngSpec rng);

}  // namespace usab
