#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/learners/mlp.hpp"

namespace cohort::testing {

/// F statistic from explicit between/within sums of squares, two passes over
/// the data; p-value not included.
struct AnovaOracle {
  double ss_between = 0.0;
  double ss_within = 0.0;
  double f_stat = 0.0;
};
AnovaOracle anova_by_sums_of_squares(const std::vector<std::vector<double>>& groups);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

/// P(F <= x) for F(d1, d2) by integrating the density after the substitution
/// x = t^2, which removes the x^(-1/2) singularity at zero for d1 = 1.
double f_cdf_by_quadrature(double x, double d1, double d2);

/// Fraction of (positive, negative) pairs with the positive scored higher,
/// ties counting one half, by direct pair enumeration.
double auc_by_pairs(std::span<const double> scores, std::span<const bool> positive);

/// k nearest rows to `query` (excluding it) by exhaustive sorting of Euclidean
/// distances; ties by index.
std::vector<std::size_t> knn_by_sorting(const Matrix& points, std::size_t query, std::size_t k);

/// lambda with point = a + lambda (b - a), recovered coordinate by coordinate;
/// nullopt when the coordinates disagree by more than `tol` or lambda falls
/// outside [0, 1].
std::optional<double> interpolation_lambda(const Vector& a, const Vector& b, const Vector& point, double tol);

/// Central-difference gradient of f at x with step h.
std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h);

/// Largest relative difference between the analytic MLP gradient and central
/// differences (step 1e-6) over every weight and bias; the relative scale is
/// floored at 1e-8.
double mlp_gradient_check(const MlpState& state, const Matrix& x, const std::vector<int>& y);

}  // namespace cohort::testing
