#include "usab/metrics.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "usab/error.hpp"

namespace usab {

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_present(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : class_names_(std::move(class_names)), counts_(class_names_.size() * class_names_.size(), 0) {
  require(!class_names_.empty(), ErrorCode::InvalidArgument, "confusion matrix needs classes");
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names,
                                 std::vector<std::vector<std::uint64_t>> counts)
    : ConfusionMatrix(std::move(class_names)) {
  require(counts.size() == num_classes(), ErrorCode::DimensionMismatch, "counts must be K x K");
  for (std::size_t p = 0; p < counts.size(); ++p) {
    require(counts[p].size() == num_classes(), ErrorCode::DimensionMismatch, "counts must be K x K");
    for (std::size_t t = 0; t < counts[p].size(); ++t) counts_[p * num_classes() + t] = counts[p][t];
  }
}

void ConfusionMatrix::add(std::size_t predicted, std::size_t truth, std::uint64_t count) {
  require(predicted < num_classes() && truth < num_classes(), ErrorCode::UnknownClass,
          "class id outside the confusion matrix");
  counts_[predicted * num_classes() + truth] += count;
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < num_classes(); ++c) t += at(c, c);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t t = 0; t < num_classes(); ++t) s += at(predicted, t);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < num_classes(); ++p) s += at(p, truth);
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  require(class_names_ == other.class_names_, ErrorCode::DimensionMismatch,
          "cannot merge confusion matrices over different classes");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

ConfusionMatrix confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::vector<std::string> class_names) {
  require(predicted.size() == truth.size() && !predicted.empty(), ErrorCode::LengthMismatch,
          "predictions and truth must have equal, non-zero length");
  ConfusionMatrix cm(std::move(class_names));
  for (std::size_t i = 0; i < predicted.size(); ++i) cm.add(predicted[i], truth[i]);
  return cm;
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const bool> positive) {
  require(scores.size() == positive.size(), ErrorCode::LengthMismatch,
          "one label per score required");
  const auto n_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
  const std::size_t n_neg = positive.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Walk thresholds from high to low, adding one trapezoid per tie group.
  double area = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const std::size_t tp_before = tp;
    const std::size_t fp_before = fp;
    const double score = scores[order[i]];
    while (i < order.size() && scores[order[i]] == score) {
      (positive[order[i]] ? tp : fp) += 1;
      ++i;
    }
    area += static_cast<double>(fp - fp_before) * static_cast<double>(tp + tp_before) / 2.0;
  }
  return area / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricsReport metrics(const ConfusionMatrix& cm, const ScoredPredictions* scores) {
  const std::uint64_t total = cm.total();
  require(total > 0, ErrorCode::EmptyMatrix, "confusion matrix has no entries");
  const std::size_t k = cm.num_classes();

  MetricsReport report;
  report.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  for (std::size_t c = 0; c < k; ++c) {
    const std::uint64_t hit = cm.at(c, c);
    const std::uint64_t row = cm.row_sum(c);
    const std::uint64_t col = cm.col_sum(c);
    report.precision.push_back(ratio(hit, row));
    report.recall.push_back(ratio(hit, col));
    const std::uint64_t true_negative = total - row - col + hit;
    report.specificity.push_back(ratio(true_negative, total - col));
  }
  report.macro_precision = mean_present(report.precision);
  report.macro_recall = mean_present(report.recall);

  if (scores != nullptr) {
    require(scores->scores.cols() == k, ErrorCode::DimensionMismatch, "one score column per class");
    require(scores->scores.rows() == scores->truth.size(), ErrorCode::LengthMismatch,
            "one truth label per scored row");
    std::vector<double> column(scores->truth.size());
    std::vector<bool> positive_bits(scores->truth.size());
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < scores->truth.size(); ++i) {
        column[i] = scores->scores(i, c);
        positive_bits[i] = scores->truth[i] == c;
      }
      // std::vector<bool> has no contiguous storage; copy into a plain array.
      std::unique_ptr<bool[]> positive(new bool[positive_bits.size()]);
      std::copy(positive_bits.begin(), positive_bits.end(), positive.get());
      report.auc.push_back(roc_auc(column, std::span<const bool>(positive.get(), positive_bits.size())));
    }
    report.macro_auc = mean_present(report.auc);
  }
  return report;
}

}  // namespace usab
