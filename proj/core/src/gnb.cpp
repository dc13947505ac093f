#include <cmath>
#include <numbers>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"

namespace bugcast {

namespace {

// Stable two-class normalization of log posteriors.
std::array<double, 2> normalize_log_pair(double log0, double log1) {
  const double m = std::max(log0, log1);
  const double e0 = std::exp(log0 - m);
  const double e1 = std::exp(log1 - m);
  const double z = e0 + e1;
  return {e0 / z, e1 / z};
}

}  // namespace

std::array<double, 2> GnbModel::predict_proba(std::span<const double> x) const {
  std::array<double, 2> log_posterior = log_priors_;
  constexpr double log_2pi = 1.8378770664093453;  // log(2*pi)
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = variances_[c][j];
      const double delta = x[j] - means_[c][j];
      log_posterior[c] += -0.5 * (log_2pi + std::log(v)) - delta * delta / (2.0 * v);
    }
  }
  return normalize_log_pair(log_posterior[0], log_posterior[1]);
}

ClassifierPtr fit_gnb(const Matrix& x, std::span<const int> y, const HyperParams& hp) {
  if (x.rows() == 0) throw EmptyTrainingSet();
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());

  const std::size_t d = x.cols();
  std::array<std::size_t, 2> counts{0, 0};
  for (std::size_t i = 0; i < y.size(); ++i) ++counts[y[i] == 1 ? 1 : 0];
  if (counts[0] == 0 || counts[1] == 0) throw SingleClassTrainingSet();

  std::array<std::vector<double>, 2> means{std::vector<double>(d, 0.0),
                                           std::vector<double>(d, 0.0)};
  std::array<std::vector<double>, 2> variances{std::vector<double>(d, 0.0),
                                               std::vector<double>(d, 0.0)};

  for (std::size_t i = 0; i < x.rows(); ++i) {
    const int c = y[i] == 1 ? 1 : 0;
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) means[c][j] += row[j];
  }
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) means[c][j] /= static_cast<double>(counts[c]);
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const int c = y[i] == 1 ? 1 : 0;
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = row[j] - means[c][j];
      variances[c][j] += delta * delta;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) variances[c][j] /= static_cast<double>(counts[c]);
  }

  // Floor: ratio of the largest total feature variance, so constant features
  // keep the posterior finite.
  double max_total_variance = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x.at(i, j);
    mean /= static_cast<double>(x.rows());
    double var = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double delta = x.at(i, j) - mean;
      var += delta * delta;
    }
    var /= static_cast<double>(x.rows());
    max_total_variance = std::max(max_total_variance, var);
  }
  const double floor = max_total_variance > 0.0 ? hp.gnb_variance_floor_ratio * max_total_variance
                                                : hp.gnb_variance_floor_ratio;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) variances[c][j] = std::max(variances[c][j], floor);
  }

  const double n = static_cast<double>(x.rows());
  std::array<double, 2> log_priors{std::log(static_cast<double>(counts[0]) / n),
                                   std::log(static_cast<double>(counts[1]) / n)};
  return std::make_shared<GnbModel>(log_priors, std::move(means), std::move(variances));
}

}  // namespace bugcast
