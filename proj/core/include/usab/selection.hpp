#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "usab/ga.hpp"
#include "usab/matrix.hpp"
#include "usab/rng.hpp"
#include "usab/scoring.hpp"
#include "usab/svm.hpp"

namespace usab {

struct FeatureMask {
  std::vector<bool> bits;

  static FeatureMask full(std::size_t d);
  static FeatureMask single(std::size_t d, std::size_t feature);
  static FeatureMask from_chromosome(const Chromosome& c);

  std::size_t size() const noexcept { return bits.size(); }
  std::size_t popcount() const noexcept;
  std::vector<std::size_t> indices() const;
  /// '1' for selected features, in column order.
  std::string to_string() const;

  friend bool operator==(const FeatureMask&, const FeatureMask&) = default;
};

struct SelectionOptions {
  std::size_t folds = 5;
  /// Parsimony penalty: fitness = accuracy - lambda * popcount / D.
  double lambda = 0.0;
};

/// CV accuracy of the SVM on the masked columns, minus the parsimony penalty.
/// Pure in (mask, fm, cfg, folds, rng): the folds depend only on the labels.
double mask_fitness(const FeatureMask& mask, const FeatureMatrix& fm, const SvmConfig& svm_cfg,
                    std::size_t folds, RngSpec rng, double lambda = 0.0);

struct SelectionResult {
  FeatureMask best_mask;
  /// Accuracy without the penalty.
  double cv_accuracy = 0.0;
  double fitness = 0.0;
  std::vector<double> per_feature_frequency;
  EvolutionTrace trace;
  std::size_t masks_evaluated = 0;
};

/// The stream select_features hands to mask_fitness for a given rng.
inline RngSpec selection_cv_stream(RngSpec rng) noexcept { return substream(rng, 0x5e1); }

/// GA over bitmasks. ga_cfg.gene_count is taken from D. The initial
/// population starts with the full mask and every singleton mask. The best
/// mask is the best ever evaluated: highest fitness, then fewer features,
/// then the lexicographically smallest bit string.
SelectionResult select_features(const FeatureMatrix& fm, const SvmConfig& svm_cfg, GaConfig ga_cfg,
                                const SelectionOptions& options, RngSpec rng);

/// Default GA settings for mask search over d features.
GaConfig default_selection_ga(std::size_t d);

struct SelectionRow {
  std::string feature;
  double score = 0.0;
  bool selected = false;
  double frequency = 0.0;
};

/// Joins the selection outcome with the score table, sorted by score
/// descending, then by feature name.
std::vector<SelectionRow> selection_report(const SelectionResult& r,
                                           const std::vector<std::string>& feature_names,
                                           const FeatureScoreTable& scores);

}  // namespace usab
