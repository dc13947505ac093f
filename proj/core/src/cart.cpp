#include <algorithm>
#include <utility>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"
#include "tree_builder.hpp"

namespace bugcast {

double gini_impurity(std::span<const std::size_t, 2> class_counts) {
  const double n = static_cast<double>(class_counts[0] + class_counts[1]);
  if (n == 0.0) return 0.0;
  const double p0 = static_cast<double>(class_counts[0]) / n;
  const double p1 = static_cast<double>(class_counts[1]) / n;
  return 1.0 - (p0 * p0 + p1 * p1);
}

namespace detail {

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double weighted_gini = 0.0;
};

std::vector<std::size_t> candidate_features(std::size_t dim, std::size_t mtry, SplitMix64* rng) {
  std::vector<std::size_t> features(dim);
  for (std::size_t i = 0; i < dim; ++i) features[i] = i;
  if (mtry >= dim || rng == nullptr) return features;

  // Partial Fisher-Yates, then ascending so evaluation order is stable.
  for (std::size_t i = 0; i < mtry; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng->bounded(dim - i));
    std::swap(features[i], features[j]);
  }
  features.resize(mtry);
  std::sort(features.begin(), features.end());
  return features;
}

SplitChoice best_split(const Matrix& x, std::span<const int> y,
                       std::span<const std::size_t> indices,
                       std::span<const std::size_t> features) {
  const std::size_t m = indices.size();
  SplitChoice best;
  best.weighted_gini = std::numeric_limits<double>::infinity();

  std::vector<std::pair<double, int>> column(m);
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < m; ++i) {
      column[i] = {x.at(indices[i], f), y[indices[i]]};
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::array<std::size_t, 2> left{0, 0};
    std::array<std::size_t, 2> right{0, 0};
    for (const auto& [value, label] : column) ++right[label == 1 ? 1 : 0];

    for (std::size_t i = 0; i + 1 < m; ++i) {
      const int cls = column[i].second == 1 ? 1 : 0;
      ++left[cls];
      --right[cls];
      if (column[i].first == column[i + 1].first) continue;

      const double nl = static_cast<double>(i + 1);
      const double nr = static_cast<double>(m - i - 1);
      const double g = (nl * gini_impurity(left) + nr * gini_impurity(right)) /
                       static_cast<double>(m);
      // Strict < plus (ascending feature, ascending threshold) scan order
      // realizes the lowest-feature/lowest-threshold tie-break.
      if (g < best.weighted_gini) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
        best.weighted_gini = g;
      }
    }
  }
  return best;
}

}  // namespace

std::vector<TreeNode> build_tree(const Matrix& x, std::span<const int> y,
                                 std::vector<std::size_t> indices, const HyperParams& hp,
                                 std::size_t mtry, SplitMix64* rng) {
  if (indices.empty()) throw EmptyTrainingSet();

  struct Job {
    std::vector<std::size_t> indices;
    std::size_t depth;
    std::size_t node;
  };

  std::vector<TreeNode> nodes;
  nodes.emplace_back();
  std::vector<Job> stack;
  stack.push_back({std::move(indices), 0, 0});

  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();

    std::array<std::size_t, 2> counts{0, 0};
    for (std::size_t i : job.indices) ++counts[y[i] == 1 ? 1 : 0];
    const double m = static_cast<double>(job.indices.size());

    auto make_leaf = [&]() {
      nodes[job.node].feature = -1;
      nodes[job.node].probability = {static_cast<double>(counts[0]) / m,
                                     static_cast<double>(counts[1]) / m};
    };

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool too_small = job.indices.size() < hp.cart_min_split;
    const bool too_deep = hp.cart_max_depth > 0 && job.depth >= hp.cart_max_depth;
    if (pure || too_small || too_deep) {
      make_leaf();
      continue;
    }

    auto features = candidate_features(x.cols(), mtry, rng);
    SplitChoice split = best_split(x, y, job.indices, features);
    if (!split.found || split.weighted_gini >= gini_impurity(counts)) {
      make_leaf();
      continue;
    }

    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;
    for (std::size_t i : job.indices) {
      (x.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left_idx : right_idx)
          .push_back(i);
    }

    nodes[job.node].feature = split.feature;
    nodes[job.node].threshold = split.threshold;
    nodes[job.node].left = nodes.size();
    nodes.emplace_back();
    nodes[job.node].right = nodes.size();
    nodes.emplace_back();

    stack.push_back({std::move(right_idx), job.depth + 1, nodes[job.node].right});
    stack.push_back({std::move(left_idx), job.depth + 1, nodes[job.node].left});
  }
  return nodes;
}

}  // namespace detail

namespace {

std::array<double, 2> walk_tree(const std::vector<TreeNode>& nodes, std::span<const double> x) {
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const TreeNode& node = nodes[at];
    at = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes[at].probability;
}

}  // namespace

std::array<double, 2> CartModel::predict_proba(std::span<const double> x) const {
  return walk_tree(nodes_, x);
}

std::array<double, 2> RfModel::predict_proba(std::span<const double> x) const {
  std::array<double, 2> sum{0.0, 0.0};
  for (const auto& tree : trees_) {
    auto p = walk_tree(tree, x);
    sum[0] += p[0];
    sum[1] += p[1];
  }
  const double n = static_cast<double>(trees_.size());
  return {sum[0] / n, sum[1] / n};
}

ClassifierPtr fit_cart(const Matrix& x, std::span<const int> y, const HyperParams& hp) {
  if (x.rows() == 0) throw EmptyTrainingSet();
  if (x.rows() != y.size()) throw LengthMismatch(x.rows(), y.size());

  std::vector<std::size_t> indices(x.rows());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  return std::make_shared<CartModel>(detail::build_tree(x, y, std::move(indices), hp, x.cols(), nullptr));
}

}  // namespace bugcast
