#pragma once

#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/learners/spec.hpp"

namespace cohort {

struct TrainedModel;

/// One binary machine: f(x) = sum_i coef_i K(sv_i, x) - rho, with
/// P(positive | f) = 1 / (1 + exp(platt_a * f + platt_b)).
struct BinarySvm {
  int positive_class = 1;
  Matrix support_vectors;
  std::vector<double> coef;
  double rho = 0.0;
  double platt_a = -1.0;
  double platt_b = 0.0;

  bool operator==(const BinarySvm&) const = default;
};

struct SvmState {
  double gamma = 0.001;
  /// One machine for two classes (class 1 positive), otherwise one per class
  /// present in training, that class against the rest.
  std::vector<BinarySvm> machines;

  bool operator==(const SvmState&) const = default;
};

struct SvmDiagnostics {
  /// Dual objective sum(alpha) - 0.5 alpha' Q alpha after each SMO step, per machine.
  std::vector<std::vector<double>> dual_objective;
  std::vector<long> iterations;
  std::vector<double> final_violation;
};

double rbf_kernel(const double* a, const double* b, Eigen::Index d, double gamma);

/// Soft-margin RBF SVM solved by SMO with second-order working-set selection
/// to KKT tolerance params.tolerance, then Platt-calibrated on the training
/// decision values. Throws NumericError (with the final KKT violation) when the
/// iteration cap is reached.
TrainedModel train_svm_rbf(const Matrix& x, const std::vector<int>& y, int n_classes, const ModelSpec& spec,
                           SvmDiagnostics* diagnostics = nullptr);

/// Raw decision values (n x machines).
Matrix svm_decision_values(const SvmState& state, const Matrix& x);

/// Platt sigmoid fit (Newton with backtracking on the regularised targets).
/// Returns {A, B}.
std::pair<double, double> fit_platt(const std::vector<double>& decision, const std::vector<bool>& positive);

}  // namespace cohort
