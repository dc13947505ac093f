#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "bugcast/matrix.hpp"

namespace bugcast {

enum class ModelKind { cart, knn, lda, logreg, gnb, rf, svm, vote };

// CLI/report names: cart, knn, lda, lr, nb, rf, svm, vote.
std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);
// Comma-separated names, or "all" for the seven singles plus the vote.
std::vector<ModelKind> parse_model_list(std::string_view spec);

// scikit-learn-flavored defaults; every knob is config-overridable.
struct HyperParams {
  std::size_t knn_k = 5;

  std::size_t cart_min_split = 2;
  std::size_t cart_max_depth = 0;  // 0 = unlimited

  std::size_t rf_trees = 100;
  std::size_t rf_features_per_split = 0;  // 0 = ceil(sqrt(d))
  bool rf_bootstrap = true;

  double logreg_lambda = 1e-4;
  std::size_t logreg_max_iter = 1000;
  double logreg_tol = 1e-6;

  double gnb_variance_floor_ratio = 1e-9;  // of the largest feature variance

  double lda_ridge = 1e-9;

  double svm_lambda = 1e-4;
  std::size_t svm_epochs = 200;
  std::size_t svm_platt_max_iter = 100;
};

// The uniform contract of all learners: a calibrated 2-class probability.
// predict_proba returns p >= 0 with p0 + p1 = 1; class = argmax, tie -> 0.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual ModelKind kind() const = 0;
  virtual std::array<double, 2> predict_proba(std::span<const double> x) const = 0;

  int predict(std::span<const double> x) const {
    auto p = predict_proba(x);
    return p[1] > p[0] ? 1 : 0;
  }
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

// --- CART ------------------------------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::array<double, 2> probability{0.0, 0.0};

  bool is_leaf() const { return feature < 0; }
};

class CartModel final : public Classifier {
 public:
  explicit CartModel(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}
  ModelKind kind() const override { return ModelKind::cart; }
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }

 private:
  std::vector<TreeNode> nodes_;
};

// Exhaustive threshold search minimizing weighted child Gini; ties broken by
// (lowest feature index, lowest threshold); leaves carry class frequencies.
ClassifierPtr fit_cart(const Matrix& x, std::span<const int> y, const HyperParams& hp = {});

double gini_impurity(std::span<const std::size_t, 2> class_counts);

// --- KNN -------------------------------------------------------------------

class KnnModel final : public Classifier {
 public:
  KnnModel(Matrix train, std::vector<int> labels, std::size_t k)
      : train_(std::move(train)), labels_(std::move(labels)), k_(k) {}
  ModelKind kind() const override { return ModelKind::knn; }
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  std::size_t k() const { return k_; }

 private:
  Matrix train_;
  std::vector<int> labels_;
  std::size_t k_;
};

// Lazy learner; distance ties resolved toward the lower training-row index.
// Throws KTooLarge when k exceeds the training size.
ClassifierPtr fit_knn(const Matrix& x, std::span<const int> y, const HyperParams& hp = {});

// --- LDA -------------------------------------------------------------------

class LdaModel final : public Classifier {
 public:
  LdaModel(std::array<std::vector<double>, 2> means, std::vector<double> pooled_cholesky,
           double log_det, std::array<double, 2> log_priors);
  ModelKind kind() const override { return ModelKind::lda; }
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  const std::array<std::vector<double>, 2>& means() const { return means_; }

 private:
  std::array<std::vector<double>, 2> means_;
  std::vector<double> cholesky_;  // lower-triangular factor of pooled cov + ridge
  double log_det_;
  std::array<double, 2> log_priors_;
  std::size_t dim_;
};

// Gaussian class-conditionals with a shared ridge-regularized pooled
// covariance. Throws SingleClassTrainingSet.
ClassifierPtr fit_lda(const Matrix& x, std::span<const int> y, const HyperParams& hp = {});

// --- Logistic regression ----------------------------------------------------

class LogRegModel final : public Classifier {
 public:
  LogRegModel(std::vector<double> weights, double bias, bool converged, std::size_t iterations)
      : weights_(std::move(weights)), bias_(bias), converged_(converged), iterations_(iterations) {}
  ModelKind kind() const override { return ModelKind::logreg; }
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  bool converged() const { return converged_; }
  std::size_t iterations() const { return iterations_; }

 private:
  std::vector<double> weights_;
  double bias_;
  bool converged_;
  std::size_t iterations_;
};

// Mean negative log-likelihood plus (lambda/2)*||w||^2 (bias unpenalized).
// Exposed so gradients can be checked against finite differences.
double logreg_loss(std::span<const double> weights, double bias, const Matrix& x,
                   std::span<const int> y, double lambda);
void logreg_gradient(std::span<const double> weights, double bias, const Matrix& x,
                     std::span<const int> y, double lambda, std::span<double> grad_weights,
                     double& grad_bias);

// Full-batch gradient descent with Armijo backtracking; converged when the
// gradient infinity-norm drops below tol.
ClassifierPtr fit_logreg(const Matrix& x, std::span<const int> y, const HyperParams& hp = {});

// --- Gaussian naive Bayes ----------------------------------------------------

class GnbModel final : public Classifier {
 public:
  GnbModel(std::array<double, 2> log_priors, std::array<std::vector<double>, 2> means,
           std::array<std::vector<double>, 2> variances)
      : log_priors_(log_priors), means_(std::move(means)), variances_(std::move(variances)) {}
  ModelKind kind() const override { return ModelKind::gnb; }
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  const std::array<std::vector<double>, 2>& means() const { return means_; }
  const std::array<std::vector<double>, 2>& variances() const { return variances_; }
  const std::array<double, 2>& log_priors() const { return log_priors_; }

 private:
  std::array<double, 2> log_priors_;
  std::array<std::vector<double>, 2> means_;
  std::array<std::vector<double>, 2> variances_;
};

// Per-class Gaussian densities multiplied in log space; variances floored at
// gnb_variance_floor_ratio times the largest total feature variance.
// Throws SingleClassTrainingSet.
ClassifierPtr fit_gnb(const Matrix& x, std::span<const int> y, const HyperParams& hp = {});

// --- Random forest -----------------------------------------------------------

class RfModel final : public Classifier {
 public:
  explicit RfModel(std::vector<std::vector<TreeNode>> trees) : trees_(std::move(trees)) {}
  ModelKind kind() const override { return ModelKind::rf; }
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  std::size_t tree_count() const { return trees_.size(); }

 private:
  std::vector<std::vector<TreeNode>> trees_;
};

// Bootstrapped CART trees with per-node feature subsampling; per-tree RNG
// streams derive from the seed, so fits are reproducible.
ClassifierPtr fit_rf(const Matrix& x, std::span<const int> y, std::uint64_t seed,
                     const HyperParams& hp = {});

// --- Linear SVM with Platt scaling -------------------------------------------

class SvmModel final : public Classifier {
 public:
  SvmModel(std::vector<double> weights, double bias, double platt_a, double platt_b)
      : weights_(std::move(weights)), bias_(bias), platt_a_(platt_a), platt_b_(platt_b) {}
  ModelKind kind() const override { return ModelKind::svm; }
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  double decision_value(std::span<const double> x) const;
  double platt_a() const { return platt_a_; }
  double platt_b() const { return platt_b_; }

 private:
  std::vector<double> weights_;
  double bias_;
  double platt_a_;
  double platt_b_;
};

// Pegasos-schedule subgradient descent on the hinge loss (deterministic epoch
// order), then Platt scaling of training decision values by regularized
// maximum likelihood. Throws SingleClassTrainingSet.
ClassifierPtr fit_svm(const Matrix& x, std::span<const int> y, const HyperParams& hp = {});

}  // namespace bugcast
