#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "usab/comparison.hpp"
#include "usab/evaluation.hpp"
#include "usab/ga.hpp"
#include "usab/report.hpp"
#include "usab/scoring.hpp"
#include "usab/selection.hpp"
#include "usab/survey.hpp"
#include "usab/svm.hpp"

namespace usab {

inline constexpr std::string_view kVersion = "0.1.0";

struct PipelineConfig {
  std::uint64_t seed = 1;

  /// Survey CSV to load. When absent the polarity table drives the synthetic generator.
  std::optional<std::filesystem::path> dataset_path;
  SurveySchema schema;
  PolarityTable polarity;
  std::size_t synthetic_n = 200;
  SynthesisMode synthetic_mode = SynthesisMode::exact;

  std::vector<LabelBand> label_bands = default_label_bands();

  /// gene_count is filled in from the data.
  GaConfig scoring_ga = default_scoring_ga(0);
  std::size_t scoring_runs = 3;
  double weight_threshold = 0.0;
  double weight_resolution = 0.01;

  KernelKind kernel = KernelKind::rbf;
  std::vector<double> C_grid{0.1, 1.0, 10.0, 100.0};
  std::vector<double> gamma_grid{0.1, 0.5, 2.0, 8.0};
  std::size_t tuning_folds = 5;

  GaConfig selection_ga = default_selection_ga(0);
  SelectionOptions selection;

  std::size_t evaluation_folds = 10;
  std::size_t comparison_folds = 10;

  BenchmarkTable benchmarks;
  VerdictBands verdicts = default_verdict_bands();

  /// Canonical JSON form of the effective configuration.
  std::string canonical() const;
};

/// Unknown keys are rejected. Relative dataset paths resolve against base_dir.
PipelineConfig parse_pipeline_config(std::string_view json, const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

enum class Stage { synth, ingest, score, tune, select, evaluate, compare, report };

std::string_view stage_name(Stage s) noexcept;

struct PipelineOutputs {
  std::optional<SurveyDataset> survey;
  std::optional<FeatureMatrix> features;
  std::optional<ScoringResult> scoring;
  std::optional<WeightAggregate> weights;
  std::optional<SearchResult> tuning;
  std::optional<SelectionResult> selection;
  std::map<std::string, double> feature_accuracy_pct;
  std::optional<EvaluationResult> evaluation;
  std::optional<ComparisonTable> comparison;
  std::optional<UsabilityReport> report;
  std::vector<std::string> files;
};

/// Runs `target` and the stages it depends on, writing each stage's artifacts
/// into out_dir plus a manifest.json. Failures surface as StageError.
PipelineOutputs run_stages(const PipelineConfig& cfg, Stage target, const std::filesystem::path& out_dir);

/// The full pipeline.
inline PipelineOutputs run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir) {
  return run_stages(cfg, Stage::report, out_dir);
}

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes) noexcept;

}  // namespace usab
