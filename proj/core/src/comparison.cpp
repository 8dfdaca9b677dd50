#include "usab/comparison.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "usab/error.hpp"

namespace usab {

namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

}  // namespace

void ComparisonTable::write_csv(std::ostream& out) const {
  out << "model,accuracy,macro_precision,macro_recall,macro_auc\n";
  out << std::setprecision(17);
  for (const auto& row : rows) {
    out << row.model << ',' << row.accuracy << ',';
    put(out, row.macro_precision);
    out << ',';
    put(out, row.macro_recall);
    out << ',';
    put(out, row.macro_auc);
    out << '\n';
  }
}

ComparisonTable compare_models(std::span<const ModelSpec> models, const FeatureMatrix& fm,
                               std::size_t folds, RngSpec rng) {
  require(!models.empty(), ErrorCode::InvalidArgument, "no models to compare");
  require(fm.labeled(), ErrorCode::InvalidArgument, "comparison needs labels");
  const auto parts = evaluation_folds(fm.labels, folds, rng);

  ComparisonTable table;
  for (const auto& spec : models) {
    const auto result = evaluate_on_folds(fm, spec, parts, rng);
    table.rows.push_back({spec.name, result.metrics.accuracy, result.metrics.macro_precision,
                          result.metrics.macro_recall, result.metrics.macro_auc});
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.accuracy > b.accuracy; });
  return table;
}

}  // namespace usab
