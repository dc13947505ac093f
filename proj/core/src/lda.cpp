#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"

namespace bugcast {

LdaModel::LdaModel(std::array<std::vector<double>, 2> means, std::vector<double> pooled_cholesky,
                   double log_det, std::array<double, 2> log_priors)
    : means_(std::move(means)),
      cholesky_(std::move(pooled_cholesky)),
      log_det_(log_det),
      log_priors_(log_priors),
      dim_(means_[0].size()) {}

std::array<double, 2> LdaModel::predict_proba(std::span<const double> x) const {
  // log N(x; mu, S) = -0.5 * (x-mu)' S^-1 (x-mu) - 0.5 * log det(2 pi S)
  // with S^-1 applied through the Cholesky factor L (S = L L').
  std::array<double, 2> log_posterior{};
  constexpr double log_2pi = 1.8378770664093453;

  std::vector<double> delta(dim_);
  std::vector<double> z(dim_);
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < dim_; ++j) delta[j] = x[j] - means_[c][j];
    // forward substitution: L z = delta
    for (std::size_t i = 0; i < dim_; ++i) {
      double sum = delta[i];
      for (std::size_t j = 0; j < i; ++j) sum -= cholesky_[i * dim_ + j] * z[j];
      z[i] = sum / cholesky_[i * dim_ + i];
    }
    double quad = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) quad += z[i] * z[i];
    log_posterior[c] = log_priors_[c] - 0.5 * (quad + log_det_ +
                                               static_cast<double>(dim_) * log_2pi);
  }

  const double m = std::max(log_posterior[0], log_posterior[1]);
  const double e0 = std::exp(log_posterior[0] - m);
  const double e1 = std::exp(log_posterior[1] - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

ClassifierPtr fit_lda(const Matrix& x, std::span<const int> y, const HyperParams& hp) {
  if (x.rows() == 0) throw EmptyTrainingSet();
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());

  const std::size_t d = x.cols();
  const std::size_t n = x.rows();
  std::array<std::size_t, 2> counts{0, 0};
  for (std::size_t i = 0; i < n; ++i) ++counts[y[i] == 1 ? 1 : 0];
  if (counts[0] == 0 || counts[1] == 0) throw SingleClassTrainingSet();

  std::array<std::vector<double>, 2> means{std::vector<double>(d, 0.0),
                                           std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const int c = y[i] == 1 ? 1 : 0;
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) means[c][j] += row[j];
  }
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) means[c][j] /= static_cast<double>(counts[c]);
  }

  // Pooled within-class scatter / (n - 2), plus ridge on the diagonal.
  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                 static_cast<Eigen::Index>(d));
  Eigen::VectorXd delta(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const int c = y[i] == 1 ? 1 : 0;
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) delta[static_cast<Eigen::Index>(j)] = row[j] - means[c][j];
    pooled.noalias() += delta * delta.transpose();
  }
  const double denom = n > 2 ? static_cast<double>(n - 2) : 1.0;
  pooled /= denom;
  pooled.diagonal().array() += hp.lda_ridge;

  Eigen::LLT<Eigen::MatrixXd> llt(pooled);
  if (llt.info() != Eigen::Success) {
    throw DataError("LDA pooled covariance is not positive definite even with ridge");
  }
  Eigen::MatrixXd l = llt.matrixL();

  std::vector<double> cholesky(d * d, 0.0);
  double log_det = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cholesky[i * d + j] = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    log_det += 2.0 * std::log(l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
  }

  std::array<double, 2> log_priors{
      std::log(static_cast<double>(counts[0]) / static_cast<double>(n)),
      std::log(static_cast<double>(counts[1]) / static_cast<double>(n))};
  return std::make_shared<LdaModel>(std::move(means), std::move(cholesky), log_det, log_priors);
}

}  // namespace bugcast
