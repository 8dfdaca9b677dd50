#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "usab/comparison.hpp"
#include "usab/metrics.hpp"
#include "usab/report.hpp"
#include "usab/scoring.hpp"
#include "usab/selection.hpp"
#include "usab/survey.hpp"
#include "usab/svm.hpp"

namespace usab {

/// Writes the whole string or throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Reals are written in shortest round-trip form, so reloading is bit-exact.
std::string to_json(const SvmModel& model);
SvmModel svm_from_json(std::string_view json);
std::string to_json(const MulticlassSvm& model);

std::string to_json(const MetricsReport& m, const ConfusionMatrix& cm);
std::string to_json(const ComparisonTable& t);
std::string to_json(const UsabilityReport& r);
std::string to_json(const PolarityTable& pt);
std::string to_json(const SearchResult& r);

std::string selection_json(const SelectionResult& r, const std::vector<std::string>& feature_names,
                           const std::vector<SelectionRow>& rows);
std::string scores_json(const ScoringResult& r, const std::map<std::string, std::string>& metadata);

/// Header row `predicted\true,<class names>`, then one row per predicted class.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm);

/// `C,gamma,kernel,accuracy`
void write_tuning_csv(std::ostream& out, const SearchResult& r);

}  // namespace usab
