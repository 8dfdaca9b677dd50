#include "usab/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "usab/error.hpp"

namespace usab {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json kernel_json(const KernelSpec& k) {
  json j{{"kind", k.kind == KernelKind::linear ? "linear" : "rbf"}};
  if (k.kind == KernelKind::rbf) j["gamma"] = k.gamma;
  return j;
}

json svm_json(const SvmModel& m) {
  json sv = json::array();
  for (std::size_t i = 0; i < m.support_vectors().rows(); ++i) {
    const auto row = m.support_vectors().row(i);
    sv.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"kernel", kernel_json(m.kernel())},
          {"C", m.C()},
          {"bias", m.bias()},
          {"support_vectors", sv},
          {"dual_coefficients", m.dual_coefficients()},
          {"support_indices", m.support_indices()}};
}

}  // namespace

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(static_cast<bool>(out), ErrorCode::IoError, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_json(const SvmModel& model) { return dump(svm_json(model)); }

SvmModel svm_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    const auto& k = j.at("kernel");
    const auto kind = k.at("kind").get<std::string>();
    KernelSpec kernel;
    if (kind == "linear") {
      kernel = KernelSpec::linear();
    } else {
      require(kind == "rbf", ErrorCode::ParseError, "unknown kernel '" + kind + "'");
      kernel = KernelSpec::rbf(k.at("gamma").get<double>());
    }
    const auto rows = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    std::vector<std::size_t> support;
    if (j.contains("support_indices")) support = j.at("support_indices").get<std::vector<std::size_t>>();
    return SvmModel(Matrix::from_rows(rows), j.at("dual_coefficients").get<std::vector<double>>(),
                    j.at("bias").get<double>(), kernel, j.at("C").get<double>(), std::move(support));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid model JSON: ") + e.what());
  }
}

std::string to_json(const MulticlassSvm& model) {
  json models = json::array();
  for (const auto& m : model.models()) models.push_back(m ? svm_json(*m) : json(nullptr));
  return dump({{"class_names", model.class_names()}, {"models", models}});
}

std::string to_json(const MetricsReport& m, const ConfusionMatrix& cm) {
  json per_class = json::array();
  for (std::size_t c = 0; c < cm.num_classes(); ++c) {
    per_class.push_back({{"class", cm.class_names()[c]},
                         {"precision", opt(m.precision[c])},
                         {"recall", opt(m.recall[c])},
                         {"specificity", opt(m.specificity[c])},
                         {"auc", m.auc.empty() ? json(nullptr) : opt(m.auc[c])}});
  }
  return dump({{"accuracy", m.accuracy},
               {"total", cm.total()},
               {"correct", cm.trace()},
               {"macro_precision", opt(m.macro_precision)},
               {"macro_recall", opt(m.macro_recall)},
               {"macro_auc", opt(m.macro_auc)},
               {"classes", per_class}});
}

std::string to_json(const ComparisonTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"model", r.model},
                    {"accuracy", r.accuracy},
                    {"macro_precision", opt(r.macro_precision)},
                    {"macro_recall", opt(r.macro_recall)},
                    {"macro_auc", opt(r.macro_auc)}});
  }
  return dump({{"models", rows}});
}

std::string to_json(const UsabilityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"feature", row.feature},
                    {"score", row.score},
                    {"benchmark", row.benchmark},
                    {"delta", row.delta},
                    {"accuracy_pct", opt(row.accuracy_pct)},
                    {"verdict", row.verdict}});
  }
  return dump({{"rows", rows}, {"metadata", r.metadata}});
}

std::string to_json(const PolarityTable& pt) {
  json rows = json::array();
  for (std::size_t f = 0; f < pt.features.size(); ++f) {
    rows.push_back({{"feature", pt.features[f]},
                    {"counts", std::vector<std::uint64_t>(pt.counts[f].begin(), pt.counts[f].end())},
                    {"total", pt.row_total(f)}});
  }
  return dump({{"features", rows}});
}

std::string to_json(const SearchResult& r) {
  return dump({{"best", {{"C", r.best.C}, {"kernel", kernel_json(r.best.kernel)}}},
               {"best_accuracy", r.best_accuracy},
               {"evaluated", r.table.size()}});
}

std::string selection_json(const SelectionResult& r, const std::vector<std::string>& feature_names,
                           const std::vector<SelectionRow>& rows) {
  json selected = json::array();
  for (std::size_t i : r.best_mask.indices()) selected.push_back(feature_names.at(i));
  json report = json::array();
  for (const auto& row : rows) {
    report.push_back({{"feature", row.feature},
                      {"score", row.score},
                      {"selected", row.selected},
                      {"frequency", row.frequency}});
  }
  return dump({{"mask", r.best_mask.to_string()},
               {"selected_features", selected},
               {"cv_accuracy", r.cv_accuracy},
               {"fitness", r.fitness},
               {"frequencies", r.per_feature_frequency},
               {"masks_evaluated", r.masks_evaluated},
               {"generations", r.trace.generations.size()},
               {"trace", "trace.csv"},
               {"features", report}});
}

std::string scores_json(const ScoringResult& r, const std::map<std::string, std::string>& metadata) {
  json rows = json::array();
  for (const auto& s : r.table.rows) rows.push_back({{"feature", s.feature}, {"score", s.score}});
  return dump({{"scores", rows},
               {"weights", r.weights},
               {"R", r.fitness.R},
               {"F", r.fitness.F},
               {"generations", r.trace.generations.size()},
               {"metadata", metadata}});
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "predicted\\true";
  for (const auto& name : cm.class_names()) out << ',' << name;
  out << '\n';
  for (std::size_t p = 0; p < cm.num_classes(); ++p) {
    out << cm.class_names()[p];
    for (std::size_t t = 0; t < cm.num_classes(); ++t) out << ',' << cm.at(p, t);
    out << '\n';
  }
}

void write_tuning_csv(std::ostream& out, const SearchResult& r) {
  out << "C,gamma,kernel,accuracy\n" << std::setprecision(17);
  for (const auto& row : r.table) {
    out << row.config.C << ',' << row.config.kernel.gamma << ','
        << (row.config.kernel.kind == KernelKind::linear ? "linear" : "rbf") << ',' << row.accuracy << '\n';
  }
}

}  // namespace usab
