#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "usab/matrix.hpp"
#include "usab/rng.hpp"

namespace usab {

struct SplitSpec {
  double train_fraction = 0.7;
  RngSpec seed;
  bool stratified = true;
};

struct FoldIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Train size is floor(N * fraction), clamped so both sides are non-empty.
/// Stratified mode apportions that total over classes by largest remainder,
/// so each class lands within one sample of its proportional share.
FoldIndices split_indices(std::span<const std::size_t> labels, const SplitSpec& spec);

std::pair<FeatureMatrix, FeatureMatrix> split(const FeatureMatrix& fm, const SplitSpec& spec);

/// k test folds partitioning [0, N), sizes within one of each other. In
/// stratified mode classes are shuffled, concatenated and dealt round-robin,
/// which also spreads every class within one across folds.
std::vector<FoldIndices> kfold(std::span<const std::size_t> labels, std::size_t k,
                               const SplitSpec& spec);

std::vector<FoldIndices> kfold(const FeatureMatrix& fm, std::size_t k, const SplitSpec& spec);

}  // namespace usab
