#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bugcast/learners.hpp"
#include "bugcast/rng.hpp"

namespace bugcast::detail {

// Grows one CART tree over x[indices]. mtry candidate features are drawn per
// node when mtry < dim (rng required); mtry >= dim scans every feature in
// index order, which keeps tie-breaking identical to plain CART.
std::vector<TreeNode> build_tree(const Matrix& x, std::span<const int> y,
                                 std::vector<std::size_t> indices, const HyperParams& hp,
                                 std::size_t mtry, SplitMix64* rng);

}  // namespace bugcast::detail
