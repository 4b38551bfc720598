#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/learners/boosting.hpp"
#include "cohort/learners/forest.hpp"
#include "cohort/learners/mlp.hpp"
#include "cohort/learners/spec.hpp"
#include "cohort/learners/svm.hpp"

namespace cohort {

/// Fixed class scores, used when training saw a single class.
struct ConstantState {
  std::vector<double> scores;

  bool operator==(const ConstantState&) const = default;
};

using ModelState = std::variant<ConstantState, ForestState, BoostingState, SvmState, MlpState>;

struct TrainedModel {
  ModelSpec spec;
  int n_features = 0;
  /// Class names in label order; the score matrix has one column per class.
  std::vector<std::string> classes;
  /// Column names seen in training, when known (empty otherwise).
  std::vector<std::string> feature_names;
  ModelState state;

  int n_classes() const { return static_cast<int>(classes.size()); }
  bool operator==(const TrainedModel&) const = default;
};

/// Dispatches on spec.kind. Labels are class indices in [0, n_classes).
/// Throws DataError on empty or mismatched input, labels out of range or NaN
/// features; ConfigError on an invalid spec.
TrainedModel train_model(const ModelSpec& spec, const Matrix& x, const std::vector<int>& y, int n_classes);

/// Per-class scores (rows sum to 1). Throws DataError on a column-count mismatch.
Matrix predict_scores(const TrainedModel& model, const Matrix& x);

/// Argmax of each score row, lowest class index on ties.
std::vector<int> predict_labels(const TrainedModel& model, const Matrix& x);
std::vector<int> argmax_rows(const Matrix& scores);

/// Line-oriented text dump: a "cohort-model 1" header, the ModelSpec, class and
/// feature names and the fitted state, with doubles written as hexadecimal floats so a
/// save/load round trip is bit-exact.
std::string save_model(const TrainedModel& model);

/// Inverse of save_model. Throws ParseError on malformed input or an
/// unsupported version.
TrainedModel load_model(std::string_view text);

}  // namespace cohort
