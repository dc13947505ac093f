#include <cmath>
#include <vector>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"

namespace bugcast {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

std::array<double, 2> LogRegModel::predict_proba(std::span<const double> x) const {
  const double p1 = sigmoid(dot(weights_, x) + bias_);
  return {1.0 - p1, p1};
}

double logreg_loss(std::span<const double> weights, double bias, const Matrix& x,
                   std::span<const int> y, double lambda) {
  const double n = static_cast<double>(x.rows());
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double z = dot(weights, x.row(i)) + bias;
    const double s = y[i] == 1 ? 1.0 : -1.0;
    loss += log1p_exp(-s * z);
  }
  loss /= n;
  for (double w : weights) loss += 0.5 * lambda * w * w;
  return loss;
}

void logreg_gradient(std::span<const double> weights, double bias, const Matrix& x,
                     std::span<const int> y, double lambda, std::span<double> grad_weights,
                     double& grad_bias) {
  const double n = static_cast<double>(x.rows());
  for (auto& g : grad_weights) g = 0.0;
  grad_bias = 0.0;

  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    const double p = sigmoid(dot(weights, row) + bias);
    const double target = y[i] == 1 ? 1.0 : 0.0;
    const double residual = p - target;
    for (std::size_t j = 0; j < row.size(); ++j) grad_weights[j] += residual * row[j];
    grad_bias += residual;
  }
  for (std::size_t j = 0; j < grad_weights.size(); ++j) {
    grad_weights[j] = grad_weights[j] / n + lambda * weights[j];
  }
  grad_bias /= n;
}

ClassifierPtr fit_logreg(const Matrix& x, std::span<const int> y, const HyperParams& hp) {
  if (x.rows() == 0) throw EmptyTrainingSet();
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());

  const std::size_t d = x.cols();
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> grad(d, 0.0);
  double grad_b = 0.0;
  std::vector<double> trial_w(d, 0.0);

  bool converged = false;
  std::size_t iterations = 0;
  double step = 1.0;

  for (std::size_t iter = 0; iter < hp.logreg_max_iter; ++iter) {
    logreg_gradient(w, b, x, y, hp.logreg_lambda, grad, grad_b);

    double inf_norm = std::abs(grad_b);
    for (double g : grad) inf_norm = std::max(inf_norm, std::abs(g));
    if (inf_norm < hp.logreg_tol) {
      converged = true;
      iterations = iter;
      break;
    }

    const double loss = logreg_loss(w, b, x, y, hp.logreg_lambda);
    double grad_sq = grad_b * grad_b;
    for (double g : grad) grad_sq += g * g;

    // Armijo backtracking with a warm-started step.
    step = std::min(step * 2.0, 1.0e4);
    double trial_b = 0.0;
    while (true) {
      for (std::size_t j = 0; j < d; ++j) trial_w[j] = w[j] - step * grad[j];
      trial_b = b - step * grad_b;
      const double trial_loss = logreg_loss(trial_w, trial_b, x, y, hp.logreg_lambda);
      if (trial_loss <= loss - 1.0e-4 * step * grad_sq || step < 1.0e-16) break;
      step *= 0.5;
    }
    w.swap(trial_w);
    b = trial_b;
    iterations = iter + 1;
  }

  return std::make_shared<LogRegModel>(std::move(w), b, converged, iterations);
}

}  // namespace bugcast
