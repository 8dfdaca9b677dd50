#include "usab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "usab/error.hpp"
#include "usab/survey.hpp"

namespace usab {

namespace {

std::map<std::size_t, std::vector<std::size_t>> group_by_class(std::span<const std::size_t> labels) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  return groups;
}

}  // namespace

FoldIndices split_indices(std::span<const std::size_t> labels, const SplitSpec& spec) {
  const std::size_t n = labels.size();
  require(n >= 2, ErrorCode::TooFewSamples, "split needs at least two rows");
  require(spec.train_fraction > 0.0 && spec.train_fraction < 1.0, ErrorCode::InvalidArgument,
          "train_fraction must lie in (0,1)");
  auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * spec.train_fraction + 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  Rng rng(spec.seed);
  std::vector<bool> in_train(n, false);
  if (!spec.stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;
  } else {
    auto groups = group_by_class(labels);
    std::vector<std::uint64_t> sizes;
    for (const auto& [label, members] : groups) {
      require(members.size() >= 2, ErrorCode::ClassTooSmall,
              "class " + std::to_string(label) + " has fewer than two members");
      sizes.push_back(members.size());
    }
    const auto quotas = rescale_counts(sizes, n_train);
    std::size_t g = 0;
    for (auto& [label, members] : groups) {
      rng.shuffle(members);
      for (std::size_t i = 0; i < quotas[g]; ++i) in_train[members[i]] = true;
      ++g;
    }
  }

  FoldIndices out;
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? out.train : out.test).push_back(i);
  return out;
}

std::pair<FeatureMatrix, FeatureMatrix> split(const FeatureMatrix& fm, const SplitSpec& spec) {
  std::vector<std::size_t> labels = fm.labels;
  if (labels.empty()) labels.assign(fm.rows(), 0);
  const auto parts = split_indices(labels, spec);
  return {fm.take_rows(parts.train), fm.take_rows(parts.test)};
}

std::vector<FoldIndices> kfold(std::span<const std::size_t> labels, std::size_t k,
                               const SplitSpec& spec) {
  const std::size_t n = labels.size();
  require(k >= 2, ErrorCode::InvalidArgument, "k must be >= 2");
  require(n >= k, ErrorCode::TooFewSamples,
          "k-fold needs N >= k (N=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");

  Rng rng(spec.seed);
  std::vector<std::size_t> order;
  order.reserve(n);
  if (spec.stratified) {
    for (auto& [label, members] : group_by_class(labels)) {
      rng.shuffle(members);
      order.insert(order.end(), members.begin(), members.end());
    }
  } else {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
  }

  std::vector<std::size_t> fold_of(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold_of[order[pos]] = pos % k;

  std::vector<FoldIndices> folds(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
    }
  }
  return folds;
}

std::vector<FoldIndices> kfold(const FeatureMatrix& fm, std::size_t k, const SplitSpec& spec) {
  std::vector<std::size_t> labels = fm.labels;
  if (labels.empty()) labels.assign(fm.rows(), 0);
  return kfold(labels, k, spec);
}

}  // namespace usab
