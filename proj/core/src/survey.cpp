#include "usab/survey.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "usab/error.hpp"

namespace usab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::string cell_ref(std::size_t row, std::string_view column) {
  return "row " + std::to_string(row) + ", column '" + std::string(column) + "'";
}

}  // namespace

SurveySchema SurveySchema::one_question_per_feature(std::vector<std::string> features) {
  SurveySchema schema;
  for (std::size_t i = 0; i < features.size(); ++i) {
    schema.questions.push_back({"q" + std::to_string(i + 1), features[i]});
  }
  schema.features = std::move(features);
  return schema;
}

void SurveySchema::validate() const {
  std::set<std::string_view> seen_features;
  for (const auto& f : features) {
    require(!f.empty(), ErrorCode::InvalidArgument, "empty feature name");
    require(seen_features.insert(f).second, ErrorCode::InvalidArgument,
            "duplicate feature '" + f + "'");
  }
  std::set<std::string_view> seen_questions;
  for (const auto& q : questions) {
    require(!q.id.empty(), ErrorCode::InvalidArgument, "empty question id");
    require(q.id != "id" && q.id != "department", ErrorCode::InvalidArgument,
            "question id collides with a reserved column");
    require(seen_questions.insert(q.id).second, ErrorCode::InvalidArgument,
            "duplicate question id '" + q.id + "'");
    require(seen_features.count(q.feature) == 1, ErrorCode::InvalidArgument,
            "question '" + q.id + "' maps to unconfigured feature '" + q.feature + "'");
  }
}

std::size_t SurveySchema::feature_index(std::string_view feature) const {
  const auto it = std::find(features.begin(), features.end(), feature);
  require(it != features.end(), ErrorCode::InvalidArgument,
          "unknown feature '" + std::string(feature) + "'");
  return static_cast<std::size_t>(it - features.begin());
}

std::size_t SurveySchema::question_index(std::string_view question_id) const {
  const auto it = std::find_if(questions.begin(), questions.end(),
                               [&](const QuestionMeta& q) { return q.id == question_id; });
  require(it != questions.end(), ErrorCode::UnknownQuestionColumn,
          "unknown question '" + std::string(question_id) + "'");
  return static_cast<std::size_t>(it - questions.begin());
}

SurveyDataset::SurveyDataset(SurveySchema schema, std::vector<RespondentRecord> respondents)
    : schema_(std::move(schema)), respondents_(std::move(respondents)) {
  schema_.validate();
  std::set<std::string_view> ids;
  for (std::size_t r = 0; r < respondents_.size(); ++r) {
    const auto& rec = respondents_[r];
    require(!rec.id.empty(), ErrorCode::InvalidArgument, "respondent without id");
    require(ids.insert(rec.id).second, ErrorCode::DuplicateRespondentId,
            "respondent id '" + rec.id + "' appears twice");
    require(rec.responses.size() == schema_.questions.size(), ErrorCode::MissingResponse,
            "respondent '" + rec.id + "' does not answer every question");
    for (std::size_t q = 0; q < rec.responses.size(); ++q) {
      const int v = rec.responses[q];
      require(v >= kLikertMin && v <= kLikertMax, ErrorCode::OutOfRangeResponse,
              cell_ref(r + 1, schema_.questions[q].id) + " holds " + std::to_string(v));
    }
  }
}

int SurveyDataset::response(std::size_t respondent, std::string_view question_id) const {
  return respondents_.at(respondent).responses[schema_.question_index(question_id)];
}

std::uint64_t PolarityTable::row_total(std::size_t feature) const {
  const auto& row = counts.at(feature);
  return std::accumulate(row.begin(), row.end(), std::uint64_t{0});
}

SurveyDataset parse_survey(std::istream& in, const SurveySchema& schema) {
  schema.validate();
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      have_header = true;
      break;
    }
  }
  require(have_header, ErrorCode::MissingHeader, "survey file is empty");

  const auto header = split_csv_line(line);
  require(header.size() >= 2 && header[0] == "id" && header[1] == "department",
          ErrorCode::MissingHeader, "first record must start with 'id,department'");

  // column -> question position
  std::vector<std::size_t> column_question;
  std::vector<bool> covered(schema.questions.size(), false);
  for (std::size_t c = 2; c < header.size(); ++c) {
    const auto it = std::find_if(schema.questions.begin(), schema.questions.end(),
                                 [&](const QuestionMeta& q) { return q.id == header[c]; });
    require(it != schema.questions.end(), ErrorCode::UnknownQuestionColumn,
            "column '" + std::string(header[c]) + "' is not in the schema");
    const auto q = static_cast<std::size_t>(it - schema.questions.begin());
    require(!covered[q], ErrorCode::MissingHeader,
            "column '" + std::string(header[c]) + "' repeated");
    covered[q] = true;
    column_question.push_back(q);
  }
  for (std::size_t q = 0; q < covered.size(); ++q) {
    require(covered[q], ErrorCode::MissingResponse,
            "schema question '" + schema.questions[q].id + "' has no column");
  }

  std::vector<RespondentRecord> respondents;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv_line(line);
    require(cells.size() == header.size(), ErrorCode::MissingResponse,
            "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                " cells, header has " + std::to_string(header.size()));
    RespondentRecord rec{std::string(cells[0]), std::string(cells[1]),
                         std::vector<int>(schema.questions.size(), 0)};
    for (std::size_t c = 2; c < cells.size(); ++c) {
      const auto cell = cells[c];
      require(!cell.empty(), ErrorCode::MissingResponse, cell_ref(row, header[c]) + " is empty");
      int value = 0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      require(ec == std::errc{} && end == cell.data() + cell.size() && value >= kLikertMin &&
                  value <= kLikertMax,
              ErrorCode::OutOfRangeResponse,
              cell_ref(row, header[c]) + " holds '" + std::string(cell) + "'");
      rec.responses[column_question[c - 2]] = value;
    }
    respondents.push_back(std::move(rec));
  }
  return SurveyDataset(schema, std::move(respondents));
}

SurveyDataset load_survey(const std::filesystem::path& path, const SurveySchema& schema) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open survey '" + path.string() + "'");
  return parse_survey(in, schema);
}

void write_survey_csv(std::ostream& out, const SurveyDataset& ds) {
  out << "id,department";
  for (const auto& q : ds.schema().questions) out << ',' << q.id;
  out << '\n';
  for (const auto& rec : ds.respondents()) {
    out << rec.id << ',' << rec.department;
    for (int v : rec.responses) out << ',' << v;
    out << '\n';
  }
}

PolarityTable polarity_table(const SurveyDataset& ds) {
  const auto& schema = ds.schema();
  PolarityTable pt{schema.features, std::vector<std::array<std::uint64_t, kLikertLevels>>(
                                        schema.features.size(), {0, 0, 0, 0, 0})};
  std::vector<std::size_t> question_feature;
  for (const auto& q : schema.questions) question_feature.push_back(schema.feature_index(q.feature));
  for (const auto& rec : ds.respondents()) {
    for (std::size_t q = 0; q < rec.responses.size(); ++q) {
      ++pt.counts[question_feature[q]][static_cast<std::size_t>(rec.responses[q] - kLikertMin)];
    }
  }
  return pt;
}

std::map<std::string, std::size_t> department_counts(const SurveyDataset& ds) {
  std::map<std::string, std::size_t> counts;
  for (const auto& rec : ds.respondents()) ++counts[rec.department];
  return counts;
}

double encode_response(int likert) {
  require(likert >= kLikertMin && likert <= kLikertMax, ErrorCode::OutOfRangeResponse,
          "Likert value " + std::to_string(likert));
  return static_cast<double>(kLikertMax - likert) / static_cast<double>(kLikertMax - kLikertMin);
}

FeatureMatrix encode(const SurveyDataset& ds) {
  const auto& schema = ds.schema();
  const std::size_t d = schema.features.size();
  std::vector<std::vector<std::size_t>> feature_questions(d);
  for (std::size_t q = 0; q < schema.questions.size(); ++q) {
    feature_questions[schema.feature_index(schema.questions[q].feature)].push_back(q);
  }
  for (std::size_t f = 0; f < d; ++f) {
    require(!feature_questions[f].empty(), ErrorCode::InvalidArgument,
            "feature '" + schema.features[f] + "' has no questions to encode");
  }
  require(ds.size() >= 1 && d >= 1, ErrorCode::InvalidArgument, "cannot encode an empty survey");

  FeatureMatrix fm{Matrix(ds.size(), d), {}, schema.features, {}};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& responses = ds.respondents()[i].responses;
    for (std::size_t f = 0; f < d; ++f) {
      double sum = 0.0;
      for (std::size_t q : feature_questions[f]) sum += encode_response(responses[q]);
      fm.values(i, f) = sum / static_cast<double>(feature_questions[f].size());
    }
  }
  return fm;
}

std::vector<LabelBand> default_label_bands() {
  // Class names as printed in the reference confusion matrix; the two
  // "Not Recommended" spellings are kept as distinct classes.
  return {{0.85, "Highly Recommended"},     {0.70, "Recommended"},
          {0.50, "Neutral"},                {0.35, "Not Recommended"},
          {0.20, "Highly Not Recommended"}, {0.0, "highly Not Recommended"}};
}

FeatureMatrix auto_label(FeatureMatrix fm, std::span<const LabelBand> bands) {
  require(!bands.empty(), ErrorCode::EmptyBands, "at least one label band is required");
  for (std::size_t b = 0; b < bands.size(); ++b) {
    require(bands[b].threshold >= 0.0 && bands[b].threshold <= 1.0, ErrorCode::NonMonotoneBands,
            "band thresholds must lie in [0,1]");
    if (b > 0) {
      require(bands[b].threshold < bands[b - 1].threshold, ErrorCode::NonMonotoneBands,
              "band thresholds must be strictly decreasing");
    }
  }
  require(fm.cols() >= 1, ErrorCode::InvalidArgument, "cannot label a matrix without features");

  fm.class_names.clear();
  for (const auto& band : bands) fm.class_names.push_back(band.class_name);
  fm.labels.assign(fm.rows(), bands.size() - 1);
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    const auto row = fm.values.row(i);
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (bands[b].threshold <= mean) {
        fm.labels[i] = b;
        break;
      }
    }
  }
  return fm;
}

__extension__ using u128 = unsigned __int128;

std::vector<std::uint64_t> rescale_counts(std::span<const std::uint64_t> counts, std::uint64_t n) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == n) return {counts.begin(), counts.end()};
  require(total > 0, ErrorCode::InconsistentCounts, "cannot rescale an all-zero row");

  std::vector<std::uint64_t> out(counts.size());
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;  // (remainder, index)
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    // Integer arithmetic keeps the apportionment exact.
    const u128 scaled = static_cast<u128>(counts[i]) * n;
    out[i] = static_cast<std::uint64_t>(scaled / total);
    remainders.emplace_back(static_cast<std::uint64_t>(scaled % total), i);
    assigned += out[i];
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::uint64_t k = 0; k < n - assigned; ++k) ++out[remainders[k].second];
  return out;
}

SurveyDataset generate_synthetic(const PolarityTable& pt, std::size_t n, SynthesisMode mode,
                                 RngSpec rng) {
  require(pt.features.size() == pt.counts.size(), ErrorCode::DimensionMismatch,
          "polarity table features and counts differ in length");
  auto schema = SurveySchema::one_question_per_feature(pt.features);
  const std::size_t d = pt.features.size();

  std::vector<RespondentRecord> respondents(n);
  const int width = static_cast<int>(std::to_string(n).size());
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "r%0*zu", width, i + 1);
    respondents[i] = {id, "synthetic", std::vector<int>(d, 0)};
  }

  for (std::size_t f = 0; f < d; ++f) {
    const auto& row = pt.counts[f];
    const std::uint64_t total = pt.row_total(f);
    require(total > 0 || n == 0, ErrorCode::InconsistentCounts,
            "feature '" + pt.features[f] + "' has no counts to draw from");
    if (mode == SynthesisMode::exact) {
      const auto scaled = rescale_counts(row, n);
      std::vector<int> pool;
      pool.reserve(n);
      for (std::size_t level = 0; level < kLikertLevels; ++level) {
        pool.insert(pool.end(), scaled[level], static_cast<int>(level) + kLikertMin);
      }
      Rng stream = Rng::stream(rng, f, 1);
      stream.shuffle(pool);
      for (std::size_t i = 0; i < n; ++i) respondents[i].responses[f] = pool[i];
    } else {
      Rng stream = Rng::stream(rng, f, 2);
      for (std::size_t i = 0; i < n; ++i) {
        auto draw = static_cast<std::uint64_t>(stream.index(static_cast<std::size_t>(total)));
        std::size_t level = 0;
        while (draw >= row[level]) draw -= row[level++];
        respondents[i].responses[f] = static_cast<int>(level) + kLikertMin;
      }
    }
  }
  return SurveyDataset(std::move(schema), std::move(respondents));
}

}  // namespace usab
