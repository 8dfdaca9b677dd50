#include "usab/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "usab/error.hpp"
#include "usab/partition.hpp"

namespace usab {

namespace {

// Smallest multiplier change SMO counts as progress.
constexpr double kMinStep = 1e-10;
constexpr double kBoundSnap = 1e-12;
constexpr double kFlatCurvature = 1e-12;

void check_dims(std::span<const double> x, std::span<const double> z) {
  require(x.size() == z.size(), ErrorCode::DimensionMismatch,
          "kernel arguments differ in dimension");
}

/// Rows of X restricted to the given indices, labels mapped to +/-1.
struct BinaryView {
  Matrix X;
  std::vector<int> y;
};

}  // namespace

void KernelSpec::validate() const {
  if (kind == KernelKind::rbf) {
    require(std::isfinite(gamma) && gamma > 0.0, ErrorCode::InvalidArgument,
            "rbf gamma must be finite and > 0");
  }
}

double kernel_eval(const KernelSpec& k, std::span<const double> x, std::span<const double> z) {
  check_dims(x, z);
  if (k.kind == KernelKind::linear) {
    return std::inner_product(x.begin(), x.end(), z.begin(), 0.0);
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - z[i];
    dist2 += d * d;
  }
  return std::exp(-k.gamma * dist2);
}

Matrix kernel_matrix(const KernelSpec& k, const Matrix& X) {
  const std::size_t n = X.rows();
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel_eval(k, X.row(i), X.row(j));
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

void SvmConfig::validate() const {
  require(std::isfinite(C) && C > 0.0, ErrorCode::InvalidArgument, "C must be finite and > 0");
  require(std::isfinite(tol) && tol > 0.0, ErrorCode::InvalidArgument, "tol must be > 0");
  require(max_passes >= 1, ErrorCode::InvalidArgument, "max_passes must be >= 1");
  kernel.validate();
}

SvmConfig default_svm_config(std::size_t feature_count) {
  SvmConfig cfg;
  cfg.C = 1.0;
  cfg.kernel = KernelSpec::rbf(1.0 / static_cast<double>(std::max<std::size_t>(feature_count, 1)));
  return cfg;
}

SvmModel::SvmModel(Matrix support_vectors, std::vector<double> dual_coefficients, double bias,
                   KernelSpec kernel, double C, std::vector<std::size_t> support_indices)
    : support_vectors_(std::move(support_vectors)),
      dual_coefficients_(std::move(dual_coefficients)),
      bias_(bias),
      kernel_(kernel),
      C_(C),
      support_indices_(std::move(support_indices)) {
  require(support_vectors_.rows() >= 1, ErrorCode::InvalidArgument,
          "an SVM model needs at least one support vector");
  require(support_vectors_.rows() == dual_coefficients_.size(), ErrorCode::DimensionMismatch,
          "one dual coefficient per support vector");
  require(support_indices_.empty() || support_indices_.size() == dual_coefficients_.size(),
          ErrorCode::DimensionMismatch, "support index count mismatch");
  kernel_.validate();
}

double SvmModel::decision_function(std::span<const double> x) const {
  require(x.size() == support_vectors_.cols(), ErrorCode::DimensionMismatch,
          "input dimension does not match the support vectors");
  double f = bias_;
  for (std::size_t i = 0; i < dual_coefficients_.size(); ++i) {
    f += dual_coefficients_[i] * kernel_eval(kernel_, support_vectors_.row(i), x);
  }
  return f;
}

std::vector<double> SvmModel::alphas(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < support_indices_.size(); ++s) {
    out.at(support_indices_[s]) = std::abs(dual_coefficients_[s]);
  }
  return out;
}

double dual_objective(const Matrix& gram, std::span<const int> y, std::span<const double> alphas) {
  const std::size_t n = alphas.size();
  double linear = 0.0;
  double quadratic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alphas[i];
    for (std::size_t j = 0; j < n; ++j) {
      quadratic += alphas[i] * alphas[j] * y[i] * y[j] * gram(i, j);
    }
  }
  return linear - 0.5 * quadratic;
}

SvmModel train_binary(const Matrix& X, std::span<const int> y, const SvmConfig& cfg, RngSpec rng) {
  cfg.validate();
  const std::size_t n = X.rows();
  require(y.size() == n, ErrorCode::LengthMismatch, "one label per row required");
  require(X.all_finite(), ErrorCode::NonFiniteFeature, "training matrix contains NaN or inf");
  bool has_pos = false;
  bool has_neg = false;
  for (int v : y) {
    require(v == 1 || v == -1, ErrorCode::InvalidArgument, "binary labels must be +1 or -1");
    (v == 1 ? has_pos : has_neg) = true;
  }
  require(n >= 2 && has_pos && has_neg, ErrorCode::SingleClassInput,
          "binary SVM needs both classes present");

  const Matrix K = kernel_matrix(cfg.kernel, X);
  const double C = cfg.C;
  const double tol = cfg.tol;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> g(n, 0.0);  // sum_j alpha_j y_j K_ij, bias excluded
  double b = 0.0;
  Rng pick = Rng::stream(rng, 0x5eed);

  // Mean target over the free multipliers; without any, the midpoint of the
  // interval the bounded ones allow.
  auto bias = [&]() {
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double target = y[i] - g[i];
      if (alpha[i] > 0.0 && alpha[i] < C) {
        free_sum += target;
        ++free_count;
      } else if ((alpha[i] == 0.0) == (y[i] == 1)) {
        // y f >= 1 at alpha=0 or y f <= 1 at alpha=C gives b >= target for these.
        lo = std::max(lo, target);
      } else {
        hi = std::min(hi, target);
      }
    }
    if (free_count > 0) return free_sum / static_cast<double>(free_count);
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    return std::isfinite(lo) ? lo : hi;
  };
  b = bias();

  auto error = [&](std::size_t i) { return g[i] + b - y[i]; };

  auto take_step = [&](std::size_t i, std::size_t j) -> bool {
    if (i == j) return false;
    const double Ei = error(i);
    const double Ej = error(j);
    const double ai_old = alpha[i];
    const double aj_old = alpha[j];
    double L = 0.0;
    double H = 0.0;
    if (y[i] != y[j]) {
      L = std::max(0.0, aj_old - ai_old);
      H = std::min(C, C + aj_old - ai_old);
    } else {
      L = std::max(0.0, ai_old + aj_old - C);
      H = std::min(C, ai_old + aj_old);
    }
    if (H - L < kMinStep) return false;
    const double eta = 2.0 * K(i, j) - K(i, i) - K(j, j);
    double aj = 0.0;
    if (eta < -kFlatCurvature) {
      aj = std::clamp(aj_old - y[j] * (Ei - Ej) / eta, L, H);
    } else {
      // Flat direction (e.g. duplicate rows): the objective is linear in
      // alpha_j with this slope, so move to the better end.
      const double slope = y[j] * (Ei - Ej);
      if (std::abs(slope) <= tol) return false;
      aj = slope > 0.0 ? H : L;
    }
    if (std::abs(aj - aj_old) < kMinStep) return false;
    double ai = ai_old + y[i] * y[j] * (aj_old - aj);
    // Rounding leaves multipliers a hair inside the box; snap them onto the
    // bound so they are not mistaken for free ones.
    auto snap = [&](double a) {
      if (a < kBoundSnap * C) return 0.0;
      if (a > C - kBoundSnap * C) return C;
      return a;
    };
    ai = snap(ai);
    aj = snap(aj);

    const double di = y[i] * (ai - ai_old);
    const double dj = y[j] * (aj - aj_old);
    for (std::size_t k = 0; k < n; ++k) g[k] += di * K(i, k) + dj * K(j, k);
    alpha[i] = ai;
    alpha[j] = aj;
    b = bias();
    return true;
  };

  std::size_t clean_passes = 0;
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps && clean_passes < cfg.max_passes; ++sweep) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = error(i) * y[i];
      const bool violates = (r < -tol && alpha[i] < C) || (r > tol && alpha[i] > 0.0);
      if (!violates) continue;
      const std::size_t first = pick.index(n - 1);
      const std::size_t j0 = first >= i ? first + 1 : first;
      if (take_step(i, j0)) {
        ++changed;
        continue;
      }
      const std::size_t offset = pick.index(n);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = (offset + k) % n;
        if (j == i || j == j0) continue;
        if (take_step(i, j)) {
          ++changed;
          break;
        }
      }
    }
    clean_passes = changed == 0 ? clean_passes + 1 : 0;
  }

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) support.push_back(i);
  }
  require(!support.empty(), ErrorCode::Internal, "SMO finished without support vectors");
  std::vector<double> coef;
  coef.reserve(support.size());
  for (std::size_t i : support) coef.push_back(alpha[i] * y[i]);
  Matrix sv = X.take_rows(support);
  return SvmModel(std::move(sv), std::move(coef), b, cfg.kernel, C, std::move(support));
}

MulticlassSvm::MulticlassSvm(std::vector<std::optional<SvmModel>> models,
                             std::vector<std::string> class_names)
    : models_(std::move(models)), class_names_(std::move(class_names)) {
  require(models_.size() >= 2, ErrorCode::InvalidArgument, "multiclass SVM needs K >= 2");
  require(class_names_.empty() || class_names_.size() == models_.size(),
          ErrorCode::DimensionMismatch, "one class name per model slot");
}

std::vector<double> MulticlassSvm::decision_values(std::span<const double> x) const {
  std::vector<double> out(models_.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < models_.size(); ++c) {
    if (models_[c]) out[c] = models_[c]->decision_function(x);
  }
  return out;
}

std::size_t MulticlassSvm::predict(std::span<const double> x) const {
  const auto values = decision_values(x);
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

MulticlassSvm train_multiclass(const Matrix& X, std::span<const std::size_t> labels,
                               std::size_t num_classes, const SvmConfig& cfg, RngSpec rng,
                               std::vector<std::string> class_names) {
  require(labels.size() == X.rows(), ErrorCode::LengthMismatch, "one label per row required");
  require(num_classes >= 2, ErrorCode::InvalidArgument, "need at least two classes");
  std::vector<std::size_t> per_class(num_classes, 0);
  for (std::size_t label : labels) {
    require(label < num_classes, ErrorCode::UnknownClass, "label outside class range");
    ++per_class[label];
  }
  const auto present = static_cast<std::size_t>(
      std::count_if(per_class.begin(), per_class.end(), [](std::size_t c) { return c > 0; }));
  require(present >= 2, ErrorCode::SingleClassInput, "training data holds a single class");

  std::vector<std::optional<SvmModel>> models(num_classes);
  std::vector<int> y(labels.size());
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (per_class[c] == 0) continue;
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == c ? 1 : -1;
    models[c] = train_binary(X, y, cfg, substream(rng, c));
  }
  return MulticlassSvm(std::move(models), std::move(class_names));
}

double svm_cv_accuracy(const Matrix& X, std::span<const std::size_t> labels, std::size_t num_classes,
                       const SvmConfig& cfg, std::size_t folds, RngSpec rng) {
  const auto parts = kfold(labels, folds, SplitSpec{0.7, substream(rng, 0xf01d), true});
  std::size_t correct = 0;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    const auto& part = parts[f];
    Labels train_labels;
    for (std::size_t i : part.train) train_labels.push_back(labels[i]);
    const Matrix train = X.take_rows(part.train);
    if (distinct_count(train_labels) < 2) {
      // Degenerate fold: predict the only class seen.
      for (std::size_t i : part.test) correct += labels[i] == train_labels.front() ? 1 : 0;
      continue;
    }
    const auto model = train_multiclass(train, train_labels, num_classes, cfg, substream(rng, f, 1));
    for (std::size_t i : part.test) correct += model.predict(X.row(i)) == labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

namespace {

SearchResult pick_best(std::vector<CvRow> table) {
  require(!table.empty(), ErrorCode::EmptyGrid, "no configurations evaluated");
  SearchResult result;
  const CvRow* best = &table.front();
  for (const auto& row : table) {
    const bool better =
        row.accuracy > best->accuracy ||
        (row.accuracy == best->accuracy &&
         (row.config.C < best->config.C ||
          (row.config.C == best->config.C && row.config.kernel.gamma < best->config.kernel.gamma)));
    if (better) best = &row;
  }
  result.best = best->config;
  result.best_accuracy = best->accuracy;
  result.table = std::move(table);
  return result;
}

std::vector<double> sorted_unique(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SearchResult grid_search(const Matrix& X, std::span<const std::size_t> labels,
                         std::size_t num_classes, std::span<const double> C_grid,
                         std::span<const double> gamma_grid, std::size_t folds,
                         const SvmConfig& base, RngSpec rng) {
  require(!C_grid.empty(), ErrorCode::EmptyGrid, "C grid is empty");
  const bool linear = base.kernel.kind == KernelKind::linear;
  require(linear || !gamma_grid.empty(), ErrorCode::EmptyGrid, "gamma grid is empty");
  require(folds >= 2, ErrorCode::InvalidArgument, "folds must be >= 2");

  const auto cs = sorted_unique(C_grid);
  const auto gammas = linear ? std::vector<double>{base.kernel.gamma} : sorted_unique(gamma_grid);
  std::vector<CvRow> table;
  for (double C : cs) {
    for (double gamma : gammas) {
      SvmConfig cfg = base;
      cfg.C = C;
      cfg.kernel.gamma = gamma;
      cfg.validate();
      table.push_back({cfg, svm_cv_accuracy(X, labels, num_classes, cfg, folds, rng)});
    }
  }
  return pick_best(std::move(table));
}

SearchResult random_search(const Matrix& X, std::span<const std::size_t> labels,
                           std::size_t num_classes, LogRange C_range, LogRange gamma_range,
                           std::size_t n_draws, std::size_t folds, const SvmConfig& base,
                           RngSpec rng) {
  require(n_draws >= 1, ErrorCode::InvalidArgument, "n_draws must be >= 1");
  require(folds >= 2, ErrorCode::InvalidArgument, "folds must be >= 2");
  auto valid = [](LogRange r) {
    return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo > 0.0 && r.lo <= r.hi;
  };
  const bool linear = base.kernel.kind == KernelKind::linear;
  require(valid(C_range), ErrorCode::InvalidRange, "C range must satisfy 0 < lo <= hi");
  require(linear || valid(gamma_range), ErrorCode::InvalidRange,
          "gamma range must satisfy 0 < lo <= hi");

  Rng draw = Rng::stream(rng, 0xd4a7);
  auto sample = [&](LogRange r) {
    const double u = draw.uniform01();
    if (r.lo == r.hi) return r.lo;
    return std::exp(std::log(r.lo) + u * (std::log(r.hi) - std::log(r.lo)));
  };
  std::vector<CvRow> table;
  for (std::size_t d = 0; d < n_draws; ++d) {
    SvmConfig cfg = base;
    cfg.C = sample(C_range);
    const double gamma = sample(gamma_range);
    if (!linear) cfg.kernel.gamma = gamma;
    table.push_back({cfg, svm_cv_accuracy(X, labels, num_classes, cfg, folds, rng)});
  }
  return pick_best(std::move(table));
}

}  // namespace usab
