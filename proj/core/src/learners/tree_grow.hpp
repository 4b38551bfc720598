#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/learners/tree.hpp"

namespace cohort::detail {

struct ClassificationGrowth {
  int n_classes = 2;
  /// Candidate features drawn per split; further features are tried only when
  /// none of the drawn ones admits a split.
  int max_features = 1;
  int max_depth = 0;  ///< 0 = grow until pure
};

/// Gini tree over `rows` (repeats allowed, as in a bootstrap sample). Leaves
/// hold the majority class, lowest index on ties.
DecisionTree grow_classification_tree(const Matrix& x, std::span<const int> y, std::span<const std::size_t> rows,
                                      const ClassificationGrowth& growth, Rng& rng);

using LeafValue = std::function<double(std::span<const std::size_t> rows)>;

/// Least-squares regression tree on `target` considering every feature, with
/// leaf values supplied by `leaf_value` over the rows reaching the leaf.
DecisionTree grow_regression_tree(const Matrix& x, std::span<const double> target,
                                  std::span<const std::size_t> rows, int max_depth, const LeafValue& leaf_value);

}  // namespace cohort::detail
