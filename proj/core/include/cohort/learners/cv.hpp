#pragma once

#include <span>
#include <string>
#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/learners/spec.hpp"

namespace cohort {

struct CvResult {
  ModelSpec best_spec;
  std::size_t best_index = 0;
  /// fold_scores[s][f]: macro-F1 of grid entry s on validation fold f. Empty
  /// when the grid has a single entry (nothing to choose, nothing evaluated).
  std::vector<std::vector<double>> fold_scores;
  std::vector<double> mean_scores;
};

/// Group-aware k-fold grid search scored by macro-F1 (averaged over the classes
/// occurring in the fold's truth or predictions). The best mean wins; ties go
/// to the earlier grid entry. Throws DataError when the grid is empty, groups
/// do not align with rows, or there are fewer groups than folds.
CvResult grid_search_cv(const std::vector<ModelSpec>& grid, const Matrix& x, const std::vector<int>& y, int n_classes,
                        std::span<const std::string> groups, int folds = 10);

/// Macro-F1 over the classes present in y_true or y_pred.
double macro_f1_present(std::span<const int> y_true, std::span<const int> y_pred, int n_classes);

}  // namespace cohort
