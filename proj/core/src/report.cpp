#include "usab/report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <set>

#include "usab/error.hpp"

namespace usab {

void VerdictBands::validate() const {
  require(!bands.empty(), ErrorCode::EmptyBands, "at least one verdict band is required");
  for (std::size_t i = 1; i < bands.size(); ++i) {
    require(bands[i].min_delta < bands[i - 1].min_delta, ErrorCode::NonMonotoneBands,
            "verdict thresholds must be strictly decreasing");
  }
}

const std::string& VerdictBands::verdict(double delta) const {
  for (const auto& band : bands) {
    if (delta >= band.min_delta) return band.label;
  }
  return floor_label;
}

VerdictBands default_verdict_bands() {
  return {{{0.5, "Very good"}, {0.0, "Good"}, {-0.5, "Fair"}, {-1.5, "Average"}}, "Poor"};
}

WeightAggregate aggregate_weights(const std::vector<std::vector<double>>& runs, double threshold) {
  require(!runs.empty(), ErrorCode::EmptyRuns, "no weight vectors to aggregate");
  const std::size_t d = runs.front().size();
  WeightAggregate agg{std::vector<double>(d, 0.0), std::vector<bool>(d, false), threshold};
  for (const auto& run : runs) {
    require(run.size() == d, ErrorCode::DimensionMismatch, "weight vectors differ in length");
    for (std::size_t i = 0; i < d; ++i) agg.mean[i] += run[i];
  }
  for (std::size_t i = 0; i < d; ++i) {
    agg.mean[i] /= static_cast<double>(runs.size());
    agg.selected[i] = agg.mean[i] >= threshold;
  }
  return agg;
}

UsabilityReport build_report(const FeatureScoreTable& scores, const BenchmarkTable& bench,
                             const std::map<std::string, double>& accuracy_pct,
                             const VerdictBands& bands) {
  bands.validate();
  std::set<std::string> features;
  for (const auto& row : scores.rows) features.insert(row.feature);
  require(features.size() == scores.rows.size(), ErrorCode::FeatureUniverseMismatch,
          "duplicate feature in score table");
  std::set<std::string> benched;
  for (const auto& [name, value] : bench) {
    require(value >= 0.0 && value <= 10.0, ErrorCode::InvalidArgument,
            "benchmark for '" + name + "' is outside [0,10]");
    benched.insert(name);
  }
  require(features == benched, ErrorCode::FeatureUniverseMismatch,
          "benchmark table and score table cover different features");
  for (const auto& [name, value] : accuracy_pct) {
    require(features.count(name) == 1, ErrorCode::FeatureUniverseMismatch,
            "accuracy given for unknown feature '" + name + "'");
  }

  UsabilityReport report;
  for (const auto& s : scores.rows) {
    ReportRow row;
    row.feature = s.feature;
    row.score = s.score * 10.0;
    row.benchmark = bench.at(s.feature);
    row.delta = row.score - row.benchmark;
    if (auto it = accuracy_pct.find(s.feature); it != accuracy_pct.end()) row.accuracy_pct = it->second;
    row.verdict = bands.verdict(row.delta);
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.feature < b.feature;
  });
  return report;
}

void UsabilityReport::write_csv(std::ostream& out) const {
  out << "feature,score,benchmark,delta,accuracy_pct,verdict\n" << std::setprecision(17);
  for (const auto& row : rows) {
    out << row.feature << ',' << row.score << ',' << row.benchmark << ',' << row.delta << ',';
    if (row.accuracy_pct) out << *row.accuracy_pct;
    out << ',' << row.verdict << '\n';
  }
}

}  // namespace usab
