#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bugcast/matrix.hpp"

namespace bugcast {

// Stratified assignment of sample indices to k validation folds.
struct FoldPlan {
  std::size_t k = 10;
  std::vector<std::size_t> assignment;  // sample index -> fold id in [0, k)
  std::uint64_t seed = 0;

  std::vector<std::size_t> fold_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

// Per-class shuffle then round-robin deal, so per-fold class counts differ by
// at most 1. Throws TooFewSamples when a class has fewer than k samples.
FoldPlan stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

// z-score standardization fitted on training rows only.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // 1.0 substituted for zero-variance features
};

// Population standard deviation per feature. Throws EmptyTrainingSet.
Scaler fit_scaler(const Matrix& train);
Matrix apply_scaler(const Scaler& scaler, const Matrix& rows);

// SMOTE: appends synthetic minority rows x + u*(nn - x) until both classes
// have equal counts. Original rows are never altered or dropped. Neighbors
// are the k nearest minority rows (Euclidean; k clamped to minority-1).
// Throws DegenerateMinority when the minority class has fewer than 2 rows.
std::pair<Matrix, std::vector<int>> smote_oversample(const Matrix& x, std::span<const int> y,
                                                     std::size_t k_neighbors, std::uint64_t seed);

}  // namespace bugcast
