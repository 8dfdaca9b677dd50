#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usab/matrix.hpp"
#include "usab/rng.hpp"

namespace usab {

enum class KernelKind { linear, rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  /// rbf only; must be finite and > 0.
  double gamma = 1.0;

  static KernelSpec linear() { return {KernelKind::linear, 0.0}; }
  static KernelSpec rbf(double gamma) { return {KernelKind::rbf, gamma}; }

  void validate() const;
  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// linear: x.z; rbf: exp(-gamma * |x - z|^2)
double kernel_eval(const KernelSpec& k, std::span<const double> x, std::span<const double> z);

/// Symmetric Gram matrix of the rows of X.
Matrix kernel_matrix(const KernelSpec& k, const Matrix& X);

struct SvmConfig {
  double C = 1.0;
  KernelSpec kernel;
  /// KKT tolerance.
  double tol = 1e-3;
  /// Consecutive clean sweeps required before SMO stops.
  std::size_t max_passes = 100;
  /// Hard cap on total sweeps.
  std::size_t max_sweeps = 20000;

  void validate() const;
  friend bool operator==(const SvmConfig&, const SvmConfig&) = default;
};

/// C = 1 and gamma = 1/D.
SvmConfig default_svm_config(std::size_t feature_count);

/// Binary SVM. Only multipliers alpha_i > 0 are kept; dual_coefficients hold
/// alpha_i * y_i for the rows listed in support_indices.
class SvmModel {
 public:
  SvmModel(Matrix support_vectors, std::vector<double> dual_coefficients, double bias,
           KernelSpec kernel, double C, std::vector<std::size_t> support_indices = {});

  double decision_function(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return decision_function(x) >= 0.0 ? 1 : -1; }

  const Matrix& support_vectors() const noexcept { return support_vectors_; }
  const std::vector<double>& dual_coefficients() const noexcept { return dual_coefficients_; }
  /// Row positions in the training matrix; empty for deserialized models.
  const std::vector<std::size_t>& support_indices() const noexcept { return support_indices_; }
  double bias() const noexcept { return bias_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  double C() const noexcept { return C_; }

  /// Full alpha vector over n training rows, zero outside the support set.
  std::vector<double> alphas(std::size_t n) const;

 private:
  Matrix support_vectors_;
  std::vector<double> dual_coefficients_;
  double bias_;
  KernelSpec kernel_;
  double C_;
  std::vector<std::size_t> support_indices_;
};

/// Simplified SMO: every KKT violator i is paired with a random j first, then
/// with the remaining indices from a random offset. Stops after max_passes
/// consecutive sweeps without an update.
SvmModel train_binary(const Matrix& X, std::span<const int> y, const SvmConfig& cfg, RngSpec rng);

/// W(alpha) = sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
double dual_objective(const Matrix& gram, std::span<const int> y, std::span<const double> alphas);

/// One-vs-rest. Slot c holds the model separating class c from the rest, or
/// nothing when class c had no training rows (it is then never predicted).
class MulticlassSvm {
 public:
  MulticlassSvm(std::vector<std::optional<SvmModel>> models, std::vector<std::string> class_names);

  std::size_t num_classes() const noexcept { return models_.size(); }
  const std::vector<std::optional<SvmModel>>& models() const noexcept { return models_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  /// Decision value per class; -inf for untrained slots.
  std::vector<double> decision_values(std::span<const double> x) const;
  /// argmax of decision_values, lowest class id on ties.
  std::size_t predict(std::span<const double> x) const;

 private:
  std::vector<std::optional<SvmModel>> models_;
  std::vector<std::string> class_names_;
};

MulticlassSvm train_multiclass(const Matrix& X, std::span<const std::size_t> labels,
                               std::size_t num_classes, const SvmConfig& cfg, RngSpec rng,
                               std::vector<std::string> class_names = {});

struct CvRow {
  SvmConfig config;
  double accuracy = 0.0;
};

struct SearchResult {
  SvmConfig best;
  double best_accuracy = 0.0;
  std::vector<CvRow> table;
};

struct LogRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Pooled k-fold CV accuracy of the one-vs-rest SVM (stratified folds).
double svm_cv_accuracy(const Matrix& X, std::span<const std::size_t> labels, std::size_t num_classes,
                       const SvmConfig& cfg, std::size_t folds, RngSpec rng);

/// Every (C, gamma) pair by CV accuracy. Duplicates are dropped; ties go to
/// smaller C, then smaller gamma. A linear base kernel ignores gamma_grid.
SearchResult grid_search(const Matrix& X, std::span<const std::size_t> labels,
                         std::size_t num_classes, std::span<const double> C_grid,
                         std::span<const double> gamma_grid, std::size_t folds,
                         const SvmConfig& base, RngSpec rng);

/// n_draws log-uniform samples from C_range x gamma_range.
SearchResult random_search(const Matrix& X, std::span<const std::size_t> labels,
                           std::size_t num_classes, LogRange C_range, LogRange gamma_range,
                           std::size_t n_draws, std::size_t folds, const SvmConfig& base,
                           RngSpec rng);

}  // namespace usab
