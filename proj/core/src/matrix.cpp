#include "usab/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "usab/error.hpp"

namespace usab {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  require(values_.size() == rows * cols, ErrorCode::DimensionMismatch,
          "matrix storage does not match its shape");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    require(r.size() == cols, ErrorCode::DimensionMismatch, "ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(values));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

Matrix Matrix::take_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] < rows_, ErrorCode::InvalidArgument, "row index out of range");
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(indices[i] * cols_), cols_,
                out.values_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
  }
  return out;
}

Matrix Matrix::take_cols(std::span<const std::size_t> indices) const {
  Matrix out(rows_, indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    require(indices[j] < cols_, ErrorCode::InvalidArgument, "column index out of range");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      out(i, j) = (*this)(i, indices[j]);
    }
  }
  return out;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void FeatureMatrix::validate() const {
  require(values.rows() >= 1 && values.cols() >= 1, ErrorCode::InvalidArgument,
          "feature matrix needs at least one row and one column");
  require(feature_names.size() == values.cols(), ErrorCode::DimensionMismatch,
          "feature_names does not match column count");
  for (double v : values.data()) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorCode::InvalidArgument,
            "feature values must lie in [0,1]");
  }
  if (labeled()) {
    require(labels.size() == values.rows(), ErrorCode::LengthMismatch,
            "one label per row required");
    for (std::size_t label : labels) {
      require(label < class_names.size(), ErrorCode::UnknownClass,
              "label id outside class_names");
    }
  }
}

FeatureMatrix FeatureMatrix::take_rows(std::span<const std::size_t> indices) const {
  FeatureMatrix out{values.take_rows(indices), {}, feature_names, class_names};
  if (labeled()) {
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) out.labels.push_back(labels[i]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::take_cols(std::span<const std::size_t> indices) const {
  FeatureMatrix out{values.take_cols(indices), labels, {}, class_names};
  for (std::size_t j : indices) out.feature_names.push_back(feature_names[j]);
  return out;
}

std::size_t distinct_count(std::span<const std::size_t> labels) {
  std::vector<std::size_t> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

}  // namespace usab
