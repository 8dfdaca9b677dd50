#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "usab/classifier.hpp"
#include "usab/matrix.hpp"
#include "usab/metrics.hpp"
#include "usab/partition.hpp"
#include "usab/rng.hpp"

namespace usab {

/// Accuracy a model must exceed before it is accepted.
inline constexpr double kAcceptanceAccuracy = 0.80;

struct EvaluationResult {
  ConfusionMatrix confusion;
  MetricsReport metrics;
  bool meets_threshold = false;
  /// Out-of-fold prediction for every row.
  Labels predictions;
};

/// Trains on each fold's train rows (fold f uses substream(rng, f, 1)) and
/// pools the test-row predictions into one confusion matrix.
EvaluationResult evaluate_on_folds(const FeatureMatrix& fm, const ModelSpec& spec,
                                   std::span<const FoldIndices> folds, RngSpec rng);

/// Stratified k-fold version of evaluate_on_folds.
EvaluationResult evaluate_pipeline(const FeatureMatrix& fm, const ModelSpec& spec, std::size_t folds,
                                   RngSpec rng);

/// The stratified folds evaluate_pipeline uses for a given rng.
std::vector<FoldIndices> evaluation_folds(std::span<const std::size_t> labels, std::size_t folds,
                                          RngSpec rng);

}  // namespace usab
