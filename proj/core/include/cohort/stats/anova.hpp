#pragma once

#include <span>
#include <string>
#include <vector>

#include "cohort/features/feature_matrix.hpp"

namespace cohort {

struct AnovaResult {
  double f_stat = 0.0;
  double p_value = 1.0;
  int df_between = 0;
  int df_within = 0;
  double ss_between = 0.0;
  double ss_within = 0.0;
};

/// One-way ANOVA over two or more non-empty groups. Conventions: a zero
/// between-group sum of squares gives F = 0, p = 1; a zero within-group sum
/// with a positive between-group sum gives F = inf, p = 0.
/// Throws DataError when fewer than two groups are given, a group is empty, or
/// every group is a singleton (no within-group degrees of freedom).
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

struct KruskalWallisResult {
  double h = 0.0;
  double p_value = 1.0;
  int df = 0;
};

/// Rank-based one-way test with average ranks for ties and the usual tie
/// correction; p from the chi-square tail with k - 1 degrees of freedom.
KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups);

struct FeatureAnova {
  std::string name;
  AnovaResult result;
  bool selected = false;
};

struct SelectionReport {
  std::vector<std::string> selected;
  std::vector<FeatureAnova> per_feature;
  double alpha = 0.005;
};

/// Per column: rows grouped by class label (NaN cells dropped), one-way ANOVA,
/// selected when p <= alpha. Columns with F = 0 (constant, or no usable groups)
/// are never selected. Order follows the matrix columns.
SelectionReport select_features(const FeatureMatrix& matrix, double alpha = 0.005);

/// CSV with header feature,F,p,selected.
std::string to_csv(const SelectionReport& report);

}  // namespace cohort
