#include <algorithm>
#include <cmath>
#include <vector>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"

namespace bugcast {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// Platt's sigmoid fit (Lin/Weng/Keerthi formulation): minimizes the
// cross-entropy of p_i = 1 / (1 + exp(A*f_i + B)) against regularized
// targets t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2), by Newton's method
// with backtracking.
std::pair<double, double> fit_platt(const std::vector<double>& decision_values,
                                    std::span<const int> y, std::size_t max_iter) {
  const std::size_t n = decision_values.size();
  double prior1 = 0.0;
  for (int label : y) prior1 += label == 1 ? 1.0 : 0.0;
  const double prior0 = static_cast<double>(n) - prior1;

  const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo_target = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = y[i] == 1 ? hi_target : lo_target;

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

  auto objective = [&](double pa, double pb) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = pa * decision_values[i] + pb;
      if (z >= 0.0) {
        obj += t[i] * z + std::log1p(std::exp(-z));
      } else {
        obj += (t[i] - 1.0) * z + std::log1p(std::exp(z));
      }
    }
    return obj;
  };

  constexpr double min_step = 1.0e-10;
  constexpr double ridge = 1.0e-12;
  double f = objective(a, b);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    double h11 = ridge, h22 = ridge, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = a * decision_values[i] + b;
      double p, q;
      if (z >= 0.0) {
        const double e = std::exp(-z);
        p = e / (1.0 + e);
        q = 1.0 / (1.0 + e);
      } else {
        const double e = std::exp(z);
        p = 1.0 / (1.0 + e);
        q = e / (1.0 + e);
      }
      const double d2 = p * q;
      h11 += decision_values[i] * decision_values[i] * d2;
      h22 += d2;
      h21 += decision_values[i] * d2;
      const double d1 = t[i] - p;
      g1 += decision_values[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1.0e-5 && std::abs(g2) < 1.0e-5) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= min_step) {
      const double trial = objective(a + step * da, b + step * db);
      if (trial < f + 1.0e-4 * step * gd) {
        a += step * da;
        b += step * db;
        f = trial;
        break;
      }
      step /= 2.0;
    }
    if (step < min_step) break;
  }
  return {a, b};
}

}  // namespace

double SvmModel::decision_value(std::span<const double> x) const {
  return dot(weights_, x) + bias_;
}

std::array<double, 2> SvmModel::predict_proba(std::span<const double> x) const {
  const double z = platt_a_ * decision_value(x) + platt_b_;
  double p1;
  if (z >= 0.0) {
    const double e = std::exp(-z);
    p1 = e / (1.0 + e);
  } else {
    p1 = 1.0 / (1.0 + std::exp(z));
  }
  return {1.0 - p1, p1};
}

ClassifierPtr fit_svm(const Matrix& x, std::span<const int> y, const HyperParams& hp) {
  if (x.rows() == 0) throw EmptyTrainingSet();
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());

  bool has0 = false;
  bool has1 = false;
  for (int label : y) (label == 1 ? has1 : has0) = true;
  if (!has0 || !has1) throw SingleClassTrainingSet();

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const double lambda = hp.svm_lambda;

  // Pegasos schedule, epoch-ordered: step 1/(lambda*t) over examples in fixed
  // index order; the bias stays unregularized.
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < hp.svm_epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      auto row = x.row(i);
      const double s = y[i] == 1 ? 1.0 : -1.0;
      const double margin = s * (dot(w, row) + b);
      const double shrink = 1.0 - eta * lambda;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) w[j] = shrink * w[j] + eta * s * row[j];
        b += eta * s;
      } else {
        for (std::size_t j = 0; j < d; ++j) w[j] = shrink * w[j];
      }
    }
  }

  std::vector<double> decision_values(n);
  for (std::size_t i = 0; i < n; ++i) decision_values[i] = dot(w, x.row(i)) + b;
  auto [platt_a, platt_b] = fit_platt(decision_values, y, hp.svm_platt_max_iter);

  return std::make_shared<SvmModel>(std::move(w), b, platt_a, platt_b);
}

}  // namespace bugcast
