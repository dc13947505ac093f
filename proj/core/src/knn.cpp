#include <algorithm>
#include <vector>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"

namespace bugcast {

std::array<double, 2> KnnModel::predict_proba(std::span<const double> x) const {
  const std::size_t n = train_.rows();
  std::vector<std::pair<double, std::size_t>> distances(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = train_.row(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      double d = x[j] - row[j];
      sum += d * d;
    }
    distances[i] = {sum, i};  // tie -> lower training-row index
  }
  std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(k_) - 1,
                   distances.end());
  std::sort(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(k_));

  std::array<double, 2> votes{0.0, 0.0};
  for (std::size_t i = 0; i < k_; ++i) {
    ++votes[labels_[distances[i].second] == 1 ? 1 : 0];
  }
  const double k = static_cast<double>(k_);
  return {votes[0] / k, votes[1] / k};
}

ClassifierPtr fit_knn(const Matrix& x, std::span<const int> y, const HyperParams& hp) {
  if (x.rows() == 0) throw EmptyTrainingSet();
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());
  if (hp.knn_k == 0) throw ConfigError("knn.k must be positive");
  if (hp.knn_k > x.rows()) throw KTooLarge(hp.knn_k, x.rows());

  return std::make_shared<KnnModel>(x, std::vector<int>(y.begin(), y.end()), hp.knn_k);
}

}  // namespace bugcast
