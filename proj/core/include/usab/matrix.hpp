#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace usab {

/// Dense row-major matrix of doubles. Rows are observations.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return values_; }

  Matrix take_rows(std::span<const std::size_t> indices) const;
  Matrix take_cols(std::span<const std::size_t> indices) const;

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

using Labels = std::vector<std::size_t>;

/// Encoded survey responses (N respondents x D features, values in [0,1]),
/// optionally with one class id per respondent.
struct FeatureMatrix {
  Matrix values;
  Labels labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
  std::size_t num_classes() const noexcept { return class_names.size(); }
  bool labeled() const noexcept { return !labels.empty(); }

  /// Throws InvalidArgument when any invariant is broken: N, D >= 1, values in
  /// [0,1], names sized to D, and (if labeled) every label < K.
  void validate() const;

  FeatureMatrix take_rows(std::span<const std::size_t> indices) const;
  FeatureMatrix take_cols(std::span<const std::size_t> indices) const;
};

/// Number of distinct values in labels.
std::size_t distinct_count(std::span<const std::size_t> labels);

}  // namespace usab
