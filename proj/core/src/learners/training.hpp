#pragma once

#include <optional>
#include <vector>

#include "cohort/learners/model.hpp"

namespace cohort::detail {

/// Validates shapes, label range and finiteness; throws DataError.
void check_training_input(const Matrix& x, const std::vector<int>& y, int n_classes);

/// Model shell with spec, dimensionality and numbered class names.
TrainedModel model_shell(const ModelSpec& spec, const Matrix& x, int n_classes);

/// A constant model when y holds fewer than two distinct classes.
std::optional<TrainedModel> constant_if_degenerate(const ModelSpec& spec, const Matrix& x,
                                                   const std::vector<int>& y, int n_classes);

}  // namespace cohort::detail
