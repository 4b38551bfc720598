#include "cohort/learners/cv.hpp"

#include <numeric>

#include "cohort/common/error.hpp"
#include "cohort/common/parallel.hpp"
#include "cohort/learners/model.hpp"
#include "cohort/metrics/scores.hpp"
#include "cohort/metrics/split.hpp"
#include "common/log.hpp"

namespace cohort {

double macro_f1_present(std::span<const int> y_true, std::span<const int> y_pred, int n_classes) {
  const auto scores = confusion_and_f1(y_true, y_pred, n_classes);
  std::vector<char> present(static_cast<std::size_t>(n_classes), 0);
  for (const int v : y_true) present[static_cast<std::size_t>(v)] = 1;
  for (const int v : y_pred) present[static_cast<std::size_t>(v)] = 1;
  double total = 0.0;
  int count = 0;
  for (int c = 0; c < n_classes; ++c) {
    if (!present[static_cast<std::size_t>(c)]) continue;
    total += scores.f1[static_cast<std::size_t>(c)];
    ++count;
  }
  return count ? total / count : 0.0;
}

CvResult grid_search_cv(const std::vector<ModelSpec>& grid, const Matrix& x, const std::vector<int>& y, int n_classes,
                        std::span<const std::string> groups, int folds) {
  if (grid.empty()) throw DataError("grid search needs at least one model spec");
  if (groups.size() != y.size() || static_cast<std::size_t>(x.rows()) != y.size()) {
    throw DataError("grid search: features, labels and groups differ in length");
  }
  const auto fold_of = group_kfold(groups, folds);

  CvResult result;
  result.best_spec = grid.front();
  if (grid.size() == 1) return result;

  const auto n_folds = static_cast<std::size_t>(folds);
  std::vector<Matrix> train_x(n_folds), valid_x(n_folds);
  std::vector<std::vector<int>> train_y(n_folds), valid_y(n_folds);
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::vector<Eigen::Index> tr, va;
    for (std::size_t i = 0; i < y.size(); ++i) {
      (static_cast<std::size_t>(fold_of[i]) == f ? va : tr).push_back(static_cast<Eigen::Index>(i));
    }
    train_x[f] = x(tr, Eigen::all);
    valid_x[f] = x(va, Eigen::all);
    for (const auto i : tr) train_y[f].push_back(y[static_cast<std::size_t>(i)]);
    for (const auto i : va) valid_y[f].push_back(y[static_cast<std::size_t>(i)]);
  }

  result.fold_scores.assign(grid.size(), std::vector<double>(n_folds, 0.0));
  parallel_for(grid.size() * n_folds, [&](std::size_t job) {
    const std::size_t s = job / n_folds, f = job % n_folds;
    const auto model = train_model(grid[s], train_x[f], train_y[f], n_classes);
    const auto predicted = predict_labels(model, valid_x[f]);
    result.fold_scores[s][f] = macro_f1_present(valid_y[f], predicted, n_classes);
  });

  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto& scores = result.fold_scores[s];
    result.mean_scores.push_back(std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(n_folds));
    if (result.mean_scores[s] > result.mean_scores[result.best_index]) result.best_index = s;
    detail::logger().debug("cv {}: mean macro-F1 {:.4f}", grid[s].describe(), result.mean_scores[s]);
  }
  result.best_spec = grid[result.best_index];
  return result;
}

}  // namespace cohort
