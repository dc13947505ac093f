#include "bugcast/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "bugcast/errors.hpp"
#include "bugcast/rng.hpp"

namespace bugcast {

std::vector<std::size_t> FoldPlan::fold_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("fold count must be at least 2");

  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == 1 ? positives : negatives).push_back(i);
  }
  if (negatives.size() < k) throw TooFewSamples(0, negatives.size(), k);
  if (positives.size() < k) throw TooFewSamples(1, positives.size(), k);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(labels.size(), 0);

  SplitMix64 rng(seed);
  auto deal = [&](std::vector<std::size_t>& indices) {
    // Fisher-Yates, then round-robin.
    for (std::size_t i = indices.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng.bounded(i));
      std::swap(indices[i - 1], indices[j]);
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
      plan.assignment[indices[i]] = i % k;
    }
  };
  deal(negatives);
  deal(positives);
  return plan;
}

Scaler fit_scaler(const Matrix& train) {
  if (train.rows() == 0) throw EmptyTrainingSet();

  const std::size_t d = train.cols();
  Scaler scaler;
  scaler.mean.assign(d, 0.0);
  scaler.stddev.assign(d, 0.0);

  for (std::size_t i = 0; i < train.rows(); ++i) {
    auto row = train.row(i);
    for (std::size_t j = 0; j < d; ++j) scaler.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) scaler.mean[j] /= static_cast<double>(train.rows());

  for (std::size_t i = 0; i < train.rows(); ++i) {
    auto row = train.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      double delta = row[j] - scaler.mean[j];
      scaler.stddev[j] += delta * delta;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    double variance = scaler.stddev[j] / static_cast<double>(train.rows());
    scaler.stddev[j] = variance > 0.0 ? std::sqrt(variance) : 1.0;
  }
  return scaler;
}

Matrix apply_scaler(const Scaler& scaler, const Matrix& rows) {
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    auto src = rows.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < rows.cols(); ++j) {
      dst[j] = (src[j] - scaler.mean[j]) / scaler.stddev[j];
    }
  }
  return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace

std::pair<Matrix, std::vector<int>> smote_oversample(const Matrix& x, std::span<const int> y,
                                                     std::size_t k_neighbors, std::uint64_t seed) {
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());

  std::vector<std::size_t> minority;
  std::vector<std::size_t> majority;
  for (std::size_t i = 0; i < y.size(); ++i) {
    (y[i] == 1 ? minority : majority).push_back(i);
  }
  int minority_label = 1;
  if (minority.size() > majority.size()) {
    std::swap(minority, majority);
    minority_label = 0;
  }

  Matrix out_x = x;
  std::vector<int> out_y(y.begin(), y.end());
  const std::size_t needed = majority.size() - minority.size();
  if (needed == 0) return {std::move(out_x), std::move(out_y)};
  if (minority.size() < 2) throw DegenerateMinority(minority.size());

  const std::size_t k = std::min(k_neighbors, minority.size() - 1);

  // k nearest minority neighbors per minority row; ties by lower index.
  std::vector<std::vector<std::size_t>> neighbors(minority.size());
  for (std::size_t a = 0; a < minority.size(); ++a) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(minority.size() - 1);
    for (std::size_t b = 0; b < minority.size(); ++b) {
      if (a == b) continue;
      dist.emplace_back(squared_distance(x.row(minority[a]), x.row(minority[b])), minority[b]);
    }
    std::sort(dist.begin(), dist.end());
    neighbors[a].reserve(k);
    for (std::size_t i = 0; i < k; ++i) neighbors[a].push_back(dist[i].second);
  }

  SplitMix64 rng(seed);
  std::vector<double> synthetic(x.cols());
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t base = s % minority.size();  // even coverage of bases
    auto base_row = x.row(minority[base]);
    auto nn_row = x.row(neighbors[base][static_cast<std::size_t>(rng.bounded(k))]);
    const double u = rng.uniform();
    for (std::size_t j = 0; j < synthetic.size(); ++j) {
      synthetic[j] = base_row[j] + u * (nn_row[j] - base_row[j]);
    }
    out_x.push_row(synthetic);
    out_y.push_back(minority_label);
  }
  return {std::move(out_x), std::move(out_y)};
}

}  // namespace bugcast
