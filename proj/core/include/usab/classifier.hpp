#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "usab/baselines.hpp"
#include "usab/matrix.hpp"
#include "usab/rng.hpp"
#include "usab/svm.hpp"

namespace usab {

/// One-vs-rest SVM restricted to a subset of columns (all columns when empty).
struct SvmSpec {
  SvmConfig config;
  std::vector<std::size_t> columns;
};

struct ModelSpec {
  std::string name;
  std::variant<SvmSpec, BaselineKind> model;
};

/// A trained model of any kind behind one interface. Training data holding a
/// single class yields a constant predictor for that class.
class Classifier {
 public:
  static Classifier train(const ModelSpec& spec, const Matrix& X, std::span<const std::size_t> labels,
                          std::size_t num_classes, RngSpec rng);

  /// One score per class, larger is more likely.
  std::vector<double> scores(std::span<const double> x) const;
  std::size_t predict(std::span<const double> x) const;

  const std::string& name() const noexcept { return name_; }
  std::size_t num_classes() const noexcept { return num_classes_; }

 private:
  struct Constant {
    std::size_t label;
  };
  using Fitted = std::variant<Constant, MulticlassSvm, BaselineModel>;

  Classifier(std::string name, std::size_t num_classes, std::vector<std::size_t> columns,
             std::shared_ptr<const Fitted> fitted);

  std::string name_;
  std::size_t num_classes_;
  std::vector<std::size_t> columns_;
  std::shared_ptr<const Fitted> fitted_;
};

/// GA-SVM followed by the five baselines with default hyperparameters.
std::vector<ModelSpec> default_model_suite(const SvmConfig& svm, std::vector<std::size_t> columns);

}  // namespace usab
