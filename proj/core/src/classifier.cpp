#include "usab/classifier.hpp"

#include <algorithm>

#include "usab/error.hpp"

namespace usab {

Classifier::Classifier(std::string name, std::size_t num_classes, std::vector<std::size_t> columns,
                       std::shared_ptr<const Fitted> fitted)
    : name_(std::move(name)),
      num_classes_(num_classes),
      columns_(std::move(columns)),
      fitted_(std::move(fitted)) {}

Classifier Classifier::train(const ModelSpec& spec, const Matrix& X, std::span<const std::size_t> labels,
                             std::size_t num_classes, RngSpec rng) {
  require(X.rows() >= 1, ErrorCode::TooFewSamples, "no training rows");
  require(labels.size() == X.rows(), ErrorCode::LengthMismatch, "one label per row required");
  for (std::size_t label : labels) {
    require(label < num_classes, ErrorCode::UnknownClass, "label outside class range");
  }

  std::vector<std::size_t> columns;
  if (const auto* svm = std::get_if<SvmSpec>(&spec.model)) {
    for (std::size_t c : svm->columns) {
      require(c < X.cols(), ErrorCode::DimensionMismatch, "column index outside the matrix");
    }
    columns = svm->columns;
  }
  const Matrix view = columns.empty() ? X : X.take_cols(columns);

  std::shared_ptr<const Fitted> fitted;
  if (distinct_count(labels) < 2) {
    fitted = std::make_shared<const Fitted>(Constant{labels.front()});
  } else if (const auto* svm = std::get_if<SvmSpec>(&spec.model)) {
    fitted = std::make_shared<const Fitted>(train_multiclass(view, labels, num_classes, svm->config, rng));
  } else {
    fitted = std::make_shared<const Fitted>(
        BaselineModel::train(std::get<BaselineKind>(spec.model), view, labels, num_classes, rng));
  }
  return Classifier(spec.name, num_classes, std::move(columns), std::move(fitted));
}

std::vector<double> Classifier::scores(std::span<const double> x) const {
  std::vector<double> picked;
  if (!columns_.empty()) {
    picked.reserve(columns_.size());
    for (std::size_t c : columns_) {
      require(c < x.size(), ErrorCode::DimensionMismatch, "input is narrower than the model's columns");
      picked.push_back(x[c]);
    }
    x = picked;
  }
  if (const auto* constant = std::get_if<Constant>(fitted_.get())) {
    std::vector<double> out(num_classes_, 0.0);
    out[constant->label] = 1.0;
    return out;
  }
  if (const auto* svm = std::get_if<MulticlassSvm>(fitted_.get())) return svm->decision_values(x);
  return std::get<BaselineModel>(*fitted_).scores(x);
}

std::size_t Classifier::predict(std::span<const double> x) const {
  const auto s = scores(x);
  return static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

std::vector<ModelSpec> default_model_suite(const SvmConfig& svm, std::vector<std::size_t> columns) {
  return {
      {"ga_svm", SvmSpec{svm, std::move(columns)}},
      {"knn", BaselineKind{KnnParams{}}},
      {"gaussian_nb", BaselineKind{GaussianNbParams{}}},
      {"tree", BaselineKind{TreeParams{}}},
      {"forest", BaselineKind{ForestParams{}}},
      {"logreg", BaselineKind{LogRegParams{}}},
  };
}

}  // namespace usab
