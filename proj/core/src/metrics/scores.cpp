#include "cohort/metrics/scores.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "cohort/common/error.hpp"

namespace cohort {

ClassificationScores confusion_and_f1(std::span<const int> y_true, std::span<const int> y_pred, int n_classes) {
  if (y_true.empty()) throw DataError("confusion_and_f1 needs at least one prediction");
  if (y_true.size() != y_pred.size()) throw DataError("confusion_and_f1 inputs differ in length");
  if (n_classes < 1) throw DataError("confusion_and_f1 needs at least one class");
  const auto k = static_cast<std::size_t>(n_classes);

  ClassificationScores s;
  s.confusion.assign(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= n_classes || y_pred[i] < 0 || y_pred[i] >= n_classes) {
      throw DataError("label outside the class range at row " + std::to_string(i));
    }
    ++s.confusion[static_cast<std::size_t>(y_true[i])][static_cast<std::size_t>(y_pred[i])];
  }
  long correct = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const long tp = s.confusion[c][c];
    long predicted = 0, actual = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted += s.confusion[o][c];
      actual += s.confusion[c][o];
    }
    const double precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    const double recall = actual > 0 ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    const double f1 = (precision + recall) > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    s.precision.push_back(precision);
    s.recall.push_back(recall);
    s.f1.push_back(f1);
    correct += tp;
  }
  s.f1_macro = std::accumulate(s.f1.begin(), s.f1.end(), 0.0) / static_cast<double>(k);
  // Pooled TP / FP / FN: every error is one FP and one FN, so micro F1 reduces to accuracy.
  const auto total = static_cast<double>(y_true.size());
  const double tp = static_cast<double>(correct);
  const double fp = total - tp;
  s.f1_micro = 2.0 * tp / (2.0 * tp + fp + fp);
  return s;
}

double roc_auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw DataError("roc_auc inputs differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double n_pos = 0.0, n_neg = 0.0, rank_sum_pos = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double average_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]]) {
        rank_sum_pos += average_rank;
        n_pos += 1.0;
      } else {
        n_neg += 1.0;
      }
    }
    i = j;
  }
  if (n_pos == 0.0 || n_neg == 0.0) throw DataError("AUC is undefined unless both classes are present");
  return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

std::vector<double> one_vs_all_auc(const Matrix& scores, std::span<const int> labels) {
  if (static_cast<std::size_t>(scores.rows()) != labels.size()) throw DataError("score matrix and labels differ in length");
  std::vector<double> out;
  std::vector<double> column(labels.size());
  // std::vector<bool> cannot back a span.
  std::unique_ptr<bool[]> flags(new bool[labels.size()]);
  for (Eigen::Index c = 0; c < scores.cols(); ++c) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      column[i] = scores(static_cast<Eigen::Index>(i), c);
      flags[i] = labels[i] == c;
      pos += flags[i] ? 1 : 0;
    }
    if (pos == 0 || pos == labels.size()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    out.push_back(roc_auc(column, std::span<const bool>(flags.get(), labels.size())));
  }
  return out;
}

}  // namespace cohort
