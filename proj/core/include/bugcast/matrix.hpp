#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bugcast/dataset.hpp"
#include "bugcast/errors.hpp"

namespace bugcast {

// Dense row-major feature matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  void push_row(std::span<const double> values) {
    if (cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw InternalError("push_row: column count mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Read access to labeled rows. The seam that lets tests trace exactly which
// rows a consumer touches (the leakage-guard tests wrap it).
class RowAccess {
 public:
  virtual ~RowAccess() = default;
  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::span<const double> row(std::size_t i) const = 0;
  virtual int label(std::size_t i) const = 0;
};

// Materializes a Dataset's six features.
class DatasetView final : public RowAccess {
 public:
  explicit DatasetView(const Dataset& dataset)
      : matrix_(dataset.samples.size(), Dataset::feature_names.size()), labels_(dataset.labels()) {
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
      auto values = dataset.feature_values(i);
      auto row = matrix_.row(i);
      for (std::size_t j = 0; j < values.size(); ++j) row[j] = values[j];
    }
  }

  std::size_t size() const override { return matrix_.rows(); }
  std::size_t dim() const override { return matrix_.cols(); }
  std::span<const double> row(std::size_t i) const override { return matrix_.row(i); }
  int label(std::size_t i) const override { return labels_[i]; }

 private:
  Matrix matrix_;
  std::vector<int> labels_;
};

// In-memory rows, mainly for synthetic data in tests and experiments.
class MatrixView final : public RowAccess {
 public:
  MatrixView(Matrix matrix, std::vector<int> labels)
      : matrix_(std::move(matrix)), labels_(std::move(labels)) {
    if (matrix_.rows() != labels_.size()) {
      throw LengthMismatch(matrix_.rows(), labels_.size());
    }
  }

  std::size_t size() const override { return matrix_.rows(); }
  std::size_t dim() const override { return matrix_.cols(); }
  std::span<const double> row(std::size_t i) const override { return matrix_.row(i); }
  int label(std::size_t i) const override { return labels_[i]; }

 private:
  Matrix matrix_;
  std::vector<int> labels_;
};

// Copies the given rows out of `source`, in index order.
inline std::pair<Matrix, std::vector<int>> gather_rows(const RowAccess& source,
                                                       std::span<const std::size_t> indices) {
  Matrix x(indices.size(), source.dim());
  std::vector<int> y(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = source.row(indices[i]);
    auto dst = x.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j];
    y[i] = source.label(indices[i]);
  }
  return {std::move(x), std::move(y)};
}

}  // namespace bugcast
