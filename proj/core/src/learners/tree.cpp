#include "cohort/learners/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "learners/tree_grow.hpp"

namespace cohort {

double DecisionTree::predict(const double* row) const {
  int at = 0;
  while (!nodes[static_cast<std::size_t>(at)].is_leaf()) {
    const auto& n = nodes[static_cast<std::size_t>(at)];
    at = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(at)].value;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  // Children are always appended after their parent.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

int DecisionTree::leaf_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace detail {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

double midpoint(double lo, double hi) {
  double mid = lo + (hi - lo) / 2.0;
  if (mid >= hi) mid = lo;
  return mid;
}

class ClassificationGrower {
 public:
  ClassificationGrower(const Matrix& x, std::span<const int> y, const ClassificationGrowth& g, Rng& rng)
      : x_(x), y_(y), g_(g), rng_(rng), features_(static_cast<std::size_t>(x.cols())) {
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree run(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    std::vector<long> counts(static_cast<std::size_t>(g_.n_classes), 0);
    for (const auto r : rows) ++counts[static_cast<std::size_t>(y_[r])];
    const auto majority = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    const bool pure = counts[static_cast<std::size_t>(majority)] == static_cast<long>(rows.size());
    tree_.nodes[static_cast<std::size_t>(id)].value = majority;
    if (pure || rows.size() < 2 || (g_.max_depth > 0 && depth >= g_.max_depth)) return id;

    const Split best = find_split(rows);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (const auto r : rows) {
      (x_(static_cast<Eigen::Index>(r), best.feature) <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split find_split(const std::vector<std::size_t>& rows) {
    // Partial Fisher-Yates: the first max_features entries are the drawn
    // candidates; the rest are a fallback order.
    const std::size_t d = features_.size();
    std::size_t drawn = 0;
    Split best;
    for (std::size_t i = 0; i < d; ++i) {
      std::swap(features_[i], features_[i + rng_.index(d - i)]);
      const Split s = best_on_feature(rows, features_[i]);
      if (s.feature >= 0 && (best.feature < 0 || s.score > best.score)) best = s;
      ++drawn;
      if (drawn >= static_cast<std::size_t>(g_.max_features) && best.feature >= 0) break;
    }
    return best;
  }

  // Maximises sum_k nL_k^2 / nL + sum_k nR_k^2 / nR, equivalent to minimising
  // the weighted Gini impurity of the children.
  Split best_on_feature(const std::vector<std::size_t>& rows, int feature) {
    pairs_.clear();
    for (const auto r : rows) pairs_.emplace_back(x_(static_cast<Eigen::Index>(r), feature), y_[r]);
    std::sort(pairs_.begin(), pairs_.end());
    Split best;
    if (pairs_.front().first == pairs_.back().first) return best;

    const auto k = static_cast<std::size_t>(g_.n_classes);
    left_.assign(k, 0.0);
    right_.assign(k, 0.0);
    for (const auto& p : pairs_) right_[static_cast<std::size_t>(p.second)] += 1.0;
    double sq_left = 0.0, sq_right = 0.0;
    for (const auto c : right_) sq_right += c * c;
    const auto n = pairs_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto c = static_cast<std::size_t>(pairs_[i].second);
      sq_left += 2.0 * left_[c] + 1.0;
      left_[c] += 1.0;
      sq_right -= 2.0 * right_[c] - 1.0;
      right_[c] -= 1.0;
      if (pairs_[i].first == pairs_[i + 1].first) continue;
      const double score = sq_left / static_cast<double>(i + 1) + sq_right / static_cast<double>(n - i - 1);
      if (best.feature < 0 || score > best.score) {
        best.feature = feature;
        best.score = score;
        best.threshold = midpoint(pairs_[i].first, pairs_[i + 1].first);
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  const ClassificationGrowth& g_;
  Rng& rng_;
  std::vector<int> features_;
  std::vector<std::pair<double, int>> pairs_;
  std::vector<double> left_, right_;
  DecisionTree tree_;
};

class RegressionGrower {
 public:
  RegressionGrower(const Matrix& x, std::span<const double> target, int max_depth, const LeafValue& leaf)
      : x_(x), target_(target), max_depth_(max_depth), leaf_(leaf) {}

  DecisionTree run(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    Split best;
    if (rows.size() >= 2 && (max_depth_ <= 0 || depth < max_depth_)) best = find_split(rows);
    if (best.feature < 0) {
      tree_.nodes[static_cast<std::size_t>(id)].value = leaf_(rows);
      return id;
    }
    std::vector<std::size_t> left, right;
    for (const auto r : rows) {
      (x_(static_cast<Eigen::Index>(r), best.feature) <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  // Maximises SL^2/nL + SR^2/nR; a split must beat the parent's S^2/n.
  Split find_split(const std::vector<std::size_t>& rows) {
    double total = 0.0;
    for (const auto r : rows) total += target_[r];
    const auto n = rows.size();
    const double parent = total * total / static_cast<double>(n);
    Split best;
    best.score = parent;
    for (Eigen::Index f = 0; f < x_.cols(); ++f) {
      pairs_.clear();
      for (const auto r : rows) pairs_.emplace_back(x_(static_cast<Eigen::Index>(r), f), target_[r]);
      std::sort(pairs_.begin(), pairs_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double sum_left = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        sum_left += pairs_[i].second;
        if (pairs_[i].first == pairs_[i + 1].first) continue;
        const double sum_right = total - sum_left;
        const double score = sum_left * sum_left / static_cast<double>(i + 1) +
                             sum_right * sum_right / static_cast<double>(n - i - 1);
        if (score > best.score + 1e-12 * (1.0 + std::abs(best.score))) {
          best.feature = static_cast<int>(f);
          best.score = score;
          best.threshold = midpoint(pairs_[i].first, pairs_[i + 1].first);
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const double> target_;
  int max_depth_;
  const LeafValue& leaf_;
  std::vector<std::pair<double, double>> pairs_;
  DecisionTree tree_;
};

}  // namespace

DecisionTree grow_classification_tree(const Matrix& x, std::span<const int> y, std::span<const std::size_t> rows,
                                      const ClassificationGrowth& growth, Rng& rng) {
  ClassificationGrower grower(x, y, growth, rng);
  return grower.run(std::vector<std::size_t>(rows.begin(), rows.end()));
}

DecisionTree grow_regression_tree(const Matrix& x, std::span<const double> target,
                                  std::span<const std::size_t> rows, int max_depth, const LeafValue& leaf_value) {
  RegressionGrower grower(x, target, max_depth, leaf_value);
  return grower.run(std::vector<std::size_t>(rows.begin(), rows.end()));
}

}  // namespace detail
}  // namespace cohort
