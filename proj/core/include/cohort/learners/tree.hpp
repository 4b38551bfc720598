#pragma once

#include <vector>

namespace cohort {

/// Binary decision tree stored as a flat node array; node 0 is the root.
/// Internal nodes route x[feature] <= threshold to `left`, others to `right`.
/// Leaves have feature == -1 and carry `value` (a class index for forest
/// trees, a margin increment for boosting trees).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double predict(const double* row) const;
  int depth() const;
  int leaf_count() const;

  bool operator==(const DecisionTree&) const = default;
};

}  // namespace cohort
