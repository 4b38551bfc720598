#pragma once

#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/learners/spec.hpp"
#include "cohort/learners/tree.hpp"

namespace cohort {

struct TrainedModel;

struct ForestState {
  std::vector<DecisionTree> trees;

  bool operator==(const ForestState&) const = default;
};

struct ForestDiagnostics {
  /// Accuracy of each tree on the rows missing from its bootstrap sample
  /// (NaN when a tree saw every row).
  std::vector<double> oob_accuracy;
};

/// Bagged Gini trees grown to purity (unless params.max_depth > 0), each split
/// choosing among ceil(sqrt(d)) randomly drawn features. Scores are vote
/// fractions. Fewer than two classes in y gives a constant model with a warning.
TrainedModel train_random_forest(const Matrix& x, const std::vector<int>& y, int n_classes, const ModelSpec& spec,
                                 ForestDiagnostics* diagnostics = nullptr);

}  // namespace cohort
