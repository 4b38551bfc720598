#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cohort/common/matrix.hpp"

namespace cohort {

struct ClassificationScores {
  /// confusion[t][p]: rows are true classes, columns predicted classes.
  std::vector<std::vector<long>> confusion;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  double f1_macro = 0.0;
  double f1_micro = 0.0;
};

/// Per-class precision/recall/F1 with 0/0 taken as 0. Macro is the unweighted
/// mean over all `n_classes`; micro pools counts (equal to accuracy here).
/// Throws DataError on empty or mismatched input and labels outside the range.
ClassificationScores confusion_and_f1(std::span<const int> y_true, std::span<const int> y_pred, int n_classes);

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs ranked correctly, ties counting one half.
/// `positive[i]` marks row i as the positive class. Throws DataError when a
/// class is absent.
double roc_auc(std::span<const double> scores, std::span<const bool> positive);

/// roc_auc(scores[:, c], labels == c) for every class c present in `labels`;
/// classes absent from `labels` (or with no negatives) get NaN.
std::vector<double> one_vs_all_auc(const Matrix& scores, std::span<const int> labels);

}  // namespace cohort
