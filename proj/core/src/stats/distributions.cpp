#include "cohort/stats/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cohort/common/error.hpp"

namespace cohort {
namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// Continued fraction for I_x(a, b) (Numerical Recipes betacf, modified Lentz).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                     ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

double log_beta_front(double x, double a, double b) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
}

double gamma_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n <= kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("incomplete gamma series did not converge");
}

double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

void require_dof(int d, const char* what) {
  if (d <= 0) throw DataError(std::string(what) + " degrees of freedom must be positive");
}

}  // namespace

double regularized_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DataError("incomplete beta needs a, b > 0");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(log_beta_front(x, a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double regularized_gamma_lower(double a, double x) {
  if (!(a > 0.0)) throw DataError("incomplete gamma needs a > 0");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_upper(double a, double x) {
  if (!(a > 0.0)) throw DataError("incomplete gamma needs a > 0");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_continued_fraction(a, x);
}

double f_cdf(double x, int d1, int d2) {
  require_dof(d1, "numerator");
  require_dof(d2, "denominator");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double n1 = d1, n2 = d2;
  const double scaled = n1 * x;
  // I_z(d1/2, d2/2) with z = d1 x / (d1 x + d2); choose the branch whose
  // argument is formed without cancellation.
  const double z = scaled / (scaled + n2);
  const double w = n2 / (scaled + n2);
  if (z < 0.5) return regularized_beta(z, n1 / 2.0, n2 / 2.0);
  return 1.0 - regularized_beta(w, n2 / 2.0, n1 / 2.0);
}

double f_sf(double x, int d1, int d2) {
  require_dof(d1, "numerator");
  require_dof(d2, "denominator");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double n1 = d1, n2 = d2;
  const double scaled = n1 * x;
  const double z = scaled / (scaled + n2);
  const double w = n2 / (scaled + n2);
  if (z < 0.5) return 1.0 - regularized_beta(z, n1 / 2.0, n2 / 2.0);
  return regularized_beta(w, n2 / 2.0, n1 / 2.0);
}

double chi2_cdf(double x, int df) {
  require_dof(df, "chi-square");
  return regularized_gamma_lower(df / 2.0, x / 2.0);
}

double chi2_sf(double x, int df) {
  require_dof(df, "chi-square");
  return regularized_gamma_upper(df / 2.0, x / 2.0);
}

}  // namespace cohort
