#pragma once

namespace cohort {

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
/// Continued fraction (modified Lentz) with relative tolerance 1e-15.
double regularized_beta(double x, double a, double b);

/// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double regularized_gamma_lower(double a, double x);
double regularized_gamma_upper(double a, double x);

/// CDF and upper tail of the F(d1, d2) distribution. The tail is evaluated
/// directly (not as 1 - cdf), so small p-values keep their precision.
double f_cdf(double x, int d1, int d2);
double f_sf(double x, int d1, int d2);

double chi2_cdf(double x, int df);
double chi2_sf(double x, int df);

}  // namespace cohort
