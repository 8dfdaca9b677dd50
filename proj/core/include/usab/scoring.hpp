#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "usab/ga.hpp"
#include "usab/matrix.hpp"
#include "usab/rng.hpp"

namespace usab {

/// Encoded features with one real target per respondent.
struct ScoringProblem {
  FeatureMatrix matrix;
  std::vector<double> targets;
  double weight_resolution = 0.01;

  /// Targets from class ids: class 0 (best) maps to 1, the last class to 0.
  static ScoringProblem from_labeled(const FeatureMatrix& fm, double weight_resolution = 0.01);

  void validate() const;
  /// Number of quantization steps in [0,1].
  int levels() const;
};

struct ScoringFitness {
  double R = 0.0;
  double F = 1.0;
};

/// r_i = y_i - sum_d w_d x_id
std::vector<double> residuals(std::span<const double> w, const ScoringProblem& problem);

/// R = sqrt(mean r_i^2), F = 1 / (1 + R). Squares are summed in sorted order,
/// so permuting respondents leaves R bit-identical.
ScoringFitness total_residual(std::span<const double> w, const ScoringProblem& problem);

/// Same law applied to a residual vector directly.
ScoringFitness fitness_from_residuals(std::span<const double> r);

struct FeatureScore {
  std::string feature;
  double score = 0.0;

  friend bool operator==(const FeatureScore&, const FeatureScore&) = default;
};

struct FeatureScoreTable {
  std::vector<FeatureScore> rows;

  /// Descending by score, ties by feature name.
  void sort();
  double score_of(const std::string& feature) const;

  friend bool operator==(const FeatureScoreTable&, const FeatureScoreTable&) = default;
};

struct ScoringResult {
  FeatureScoreTable table;
  /// Best weights in column order.
  std::vector<double> weights;
  ScoringFitness fitness;
  EvolutionTrace trace;
};

/// Evolves quantized weights to maximize F. The equal-weights chromosome
/// (1/D each) is always part of the initial population.
ScoringResult score_features(const ScoringProblem& problem, GaConfig ga, RngSpec rng);

GaConfig default_scoring_ga(std::size_t d);

/// `feature,score` in table order, scores at four decimals.
void export_score_table(const FeatureScoreTable& t, std::ostream& out);
void export_score_table(const FeatureScoreTable& t, const std::filesystem::path& path);
FeatureScoreTable read_score_table(std::istream& in);

}  // namespace usab
