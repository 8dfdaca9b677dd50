#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "usab/scoring.hpp"

namespace usab {

struct VerdictBand {
  double min_delta;
  std::string label;
};

/// Thresholds on delta, highest first. A delta below every threshold gets
/// the floor label.
struct VerdictBands {
  std::vector<VerdictBand> bands;
  std::string floor_label = "Poor";

  void validate() const;
  const std::string& verdict(double delta) const;
};

/// >= 0.5 Very good, >= 0 Good, >= -0.5 Fair, >= -1.5 Average, else Poor.
VerdictBands default_verdict_bands();

/// Benchmark scores on the report's 0-10 scale, keyed by feature.
using BenchmarkTable = std::map<std::string, double>;

struct WeightAggregate {
  std::vector<double> mean;
  std::vector<bool> selected;
  double threshold = 0.0;
};

/// Per-feature mean over J runs; features with mean >= threshold are selected.
WeightAggregate aggregate_weights(const std::vector<std::vector<double>>& runs, double threshold);

struct ReportRow {
  std::string feature;
  double score = 0.0;  // 0-10
  double benchmark = 0.0;
  double delta = 0.0;
  std::optional<double> accuracy_pct;
  std::string verdict;
};

struct UsabilityReport {
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> metadata;

  /// `feature,score,benchmark,delta,accuracy_pct,verdict`
  void write_csv(std::ostream& out) const;
};

/// Scores are rescaled x10. accuracy_pct may cover a subset of features; the
/// benchmark table must match the score table's features exactly.
UsabilityReport build_report(const FeatureScoreTable& scores, const BenchmarkTable& bench,
                             const std::map<std::string, double>& accuracy_pct,
                             const VerdictBands& bands);

}  // namespace usab
