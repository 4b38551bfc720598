#pragma once

#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/learners/spec.hpp"
#include "cohort/learners/tree.hpp"

namespace cohort {

struct TrainedModel;

struct BoostingState {
  /// Initial margins: log class priors (floored for absent classes).
  std::vector<double> initial;
  /// stages[s][k]: the regression tree for class k at stage s.
  std::vector<std::vector<DecisionTree>> stages;
  /// Effective step of each stage (learning rate times any backtracking factor).
  std::vector<double> step;

  bool operator==(const BoostingState&) const = default;
};

struct BoostingDiagnostics {
  /// Mean training log-loss before the first stage and after each kept stage.
  std::vector<double> train_loss;
  int backtracked_stages = 0;
  /// True when training stopped early because a stage could not lower the loss.
  bool stalled = false;
};

/// Multinomial gradient boosting: per stage and class, a least-squares tree of
/// depth params.max_depth is fit to the residual y_k - p_k, its leaves set by a
/// single Newton step, and added scaled by the learning rate. A stage that
/// would raise the training loss has its step halved (up to ten times); if it
/// still does, training stops.
TrainedModel train_gradient_boosting(const Matrix& x, const std::vector<int>& y, int n_classes,
                                     const ModelSpec& spec, BoostingDiagnostics* diagnostics = nullptr);

/// Margins (n x K) of a boosting state after its first `stages` stages
/// (all stages when negative).
Matrix boosting_margins(const BoostingState& state, const Matrix& x, int stages = -1);

}  // namespace cohort
