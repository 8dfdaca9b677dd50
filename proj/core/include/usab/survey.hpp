#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "usab/matrix.hpp"
#include "usab/rng.hpp"

namespace usab {

inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 5;
inline constexpr std::size_t kLikertLevels = 5;

struct QuestionMeta {
  std::string id;
  std::string feature;
};

/// Which question measures which usability feature. Features are ordered and
/// may have no questions at all; every question maps to exactly one feature.
struct SurveySchema {
  std::vector<std::string> features;
  std::vector<QuestionMeta> questions;

  /// q1..qD, one per feature, in feature order.
  static SurveySchema one_question_per_feature(std::vector<std::string> features);

  void validate() const;
  std::size_t feature_index(std::string_view feature) const;
  std::size_t question_index(std::string_view question_id) const;
};

/// Responses are stored positionally, aligned with SurveySchema::questions.
struct RespondentRecord {
  std::string id;
  std::string department;
  std::vector<int> responses;
};

/// Validated, immutable survey. Construction enforces: one response per
/// question in [1,5], unique respondent ids, schema consistency.
class SurveyDataset {
 public:
  SurveyDataset(SurveySchema schema, std::vector<RespondentRecord> respondents);

  const SurveySchema& schema() const noexcept { return schema_; }
  const std::vector<RespondentRecord>& respondents() const noexcept { return respondents_; }
  std::size_t size() const noexcept { return respondents_.size(); }

  int response(std::size_t respondent, std::string_view question_id) const;

 private:
  SurveySchema schema_;
  std::vector<RespondentRecord> respondents_;
};

/// Per-feature histogram of Likert levels. counts[f][level - 1].
struct PolarityTable {
  std::vector<std::string> features;
  std::vector<std::array<std::uint64_t, kLikertLevels>> counts;

  std::uint64_t row_total(std::size_t feature) const;
  friend bool operator==(const PolarityTable&, const PolarityTable&) = default;
};

/// Parses `id,department,q...` CSV. Invalid rows abort the load.
SurveyDataset parse_survey(std::istream& in, const SurveySchema& schema);
SurveyDataset load_survey(const std::filesystem::path& path, const SurveySchema& schema);
void write_survey_csv(std::ostream& out, const SurveyDataset& ds);

PolarityTable polarity_table(const SurveyDataset& ds);

/// Respondents per department, for plot data.
std::map<std::string, std::size_t> department_counts(const SurveyDataset& ds);

/// (5 - r) / 4: "strongly agree" (1) maps to 1.0, "strongly disagree" (5) to 0.0.
double encode_response(int likert);

/// Per respondent and feature, the mean encoded response over that feature's
/// questions. Every feature must own at least one question. Labels are unset.
FeatureMatrix encode(const SurveyDataset& ds);

struct LabelBand {
  double threshold;
  std::string class_name;
};

/// Six classes, best first: 0.85 / 0.70 / 0.50 / 0.35 / 0.20 / 0.0.
std::vector<LabelBand> default_label_bands();

/// Labels each row with the first band whose threshold is <= the row mean
/// (closed lower bound). Rows below every threshold fall in the last band.
/// class_names are replaced by the band names, so class id 0 is the best band.
FeatureMatrix auto_label(FeatureMatrix fm, std::span<const LabelBand> bands);

enum class SynthesisMode { exact, sampled };

/// Largest-remainder apportionment of n over the given weights.
std::vector<std::uint64_t> rescale_counts(std::span<const std::uint64_t> counts, std::uint64_t n);

/// One question per polarity-table feature. Exact mode reproduces the table
/// (after rescaling each row to n) and shuffles the allocation per feature;
/// sampled mode draws each response from the row's multinomial.
SurveyDataset generate_synthetic(const PolarityTable& pt, std::size_t n, SynthesisMode mode,
                                 RngSpec rng);

}  // namespace usab
