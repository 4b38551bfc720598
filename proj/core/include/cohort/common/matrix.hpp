#pragma once

#include <Eigen/Core>

namespace cohort {

/// Dense row-major sample-by-feature matrix. NaN marks a missing value.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace cohort
