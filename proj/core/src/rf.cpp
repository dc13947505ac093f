#include <cmath>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"
#include "bugcast/rng.hpp"
#include "tree_builder.hpp"

namespace bugcast {

ClassifierPtr fit_rf(const Matrix& x, std::span<const int> y, std::uint64_t seed,
                     const HyperParams& hp) {
  if (x.rows() == 0) throw EmptyTrainingSet();
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());
  if (hp.rf_trees == 0) throw ConfigError("rf.trees must be positive");

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t mtry =
      hp.rf_features_per_split > 0
          ? std::min(hp.rf_features_per_split, d)
          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

  std::vector<std::vector<TreeNode>> trees;
  trees.reserve(hp.rf_trees);
  for (std::size_t t = 0; t < hp.rf_trees; ++t) {
    SplitMix64 rng(mix_seed(seed, t));

    std::vector<std::size_t> sample(n);
    if (hp.rf_bootstrap) {
      for (std::size_t i = 0; i < n; ++i) sample[i] = static_cast<std::size_t>(rng.bounded(n));
    } else {
      for (std::size_t i = 0; i < n; ++i) sample[i] = i;
    }

    trees.push_back(detail::build_tree(x, y, std::move(sample), hp, mtry,
                                       mtry < d ? &rng : nullptr));
  }
  return std::make_shared<RfModel>(std::move(trees));
}

}  // namespace bugcast
