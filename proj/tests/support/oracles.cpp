#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cohort::testing {

AnovaOracle anova_by_sums_of_squares(const std::vector<std::vector<double>>& groups) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    for (const double v : g) total += v;
    n += g.size();
  }
  const double grand = total / static_cast<double>(n);
  AnovaOracle o;
  std::size_t k = 0;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    ++k;
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    o.ss_between += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (const double v : g) o.ss_within += (v - mean) * (v - mean);
  }
  const double df_b = static_cast<double>(k - 1), df_w = static_cast<double>(n - k);
  o.f_stat = (o.ss_between / df_b) / (o.ss_within / df_w);
  return o;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = (a + b) / 2.0;
  const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f((a + b) / 2.0);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 60);
}

double f_cdf_by_quadrature(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double log_beta = std::lgamma(d1 / 2.0) + std::lgamma(d2 / 2.0) - std::lgamma((d1 + d2) / 2.0);
  // g(t) = 2 t f(t^2) = 2 t^(d1-1) sqrt(d1^d1 d2^d2 / (d1 t^2 + d2)^(d1+d2)) / B(d1/2, d2/2)
  auto g = [&](double t) {
    const double log_core =
        0.5 * (d1 * std::log(d1) + d2 * std::log(d2) - (d1 + d2) * std::log(d1 * t * t + d2)) - log_beta;
    return 2.0 * std::pow(t, d1 - 1.0) * std::exp(log_core);
  };
  return adaptive_simpson(g, 0.0, std::sqrt(x), 1e-12);
}

double auc_by_pairs(std::span<const double> scores, std::span<const bool> positive) {
  double hits = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) hits += 1.0;
      else if (scores[i] == scores[j]) hits += 0.5;
    }
  }
  return hits / pairs;
}

std::vector<std::size_t> knn_by_sorting(const Matrix& points, std::size_t query, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (static_cast<std::size_t>(i) == query) continue;
    d.emplace_back((points.row(i) - points.row(static_cast<Eigen::Index>(query))).norm(), static_cast<std::size_t>(i));
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k && i < d.size(); ++i) out.push_back(d[i].second);
  return out;
}

std::optional<double> interpolation_lambda(const Vector& a, const Vector& b, const Vector& point, double tol) {
  std::optional<double> lambda;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double span = b[j] - a[j];
    if (std::abs(span) < 1e-12) {
      if (std::abs(point[j] - a[j]) > tol) return std::nullopt;
      continue;
    }
    const double l = (point[j] - a[j]) / span;
    if (!lambda) {
      lambda = l;
    } else if (std::abs(*lambda - l) > tol) {
      return std::nullopt;
    }
  }
  if (!lambda) return 0.0;
  if (*lambda < -tol || *lambda > 1.0 + tol) return std::nullopt;
  return lambda;
}

std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double mlp_gradient_check(const MlpState& state, const Matrix& x, const std::vector<int>& y) {
  MlpState grad;
  mlp_loss_and_gradient(state, x, y, &grad);
  std::vector<double> flat, analytic;
  for (std::size_t l = 0; l < state.weights.size(); ++l) {
    for (Eigen::Index k = 0; k < state.weights[l].size(); ++k) {
      flat.push_back(state.weights[l].data()[k]);
      analytic.push_back(grad.weights[l].data()[k]);
    }
    for (Eigen::Index k = 0; k < state.biases[l].size(); ++k) {
      flat.push_back(state.biases[l](k));
      analytic.push_back(grad.biases[l](k));
    }
  }
  auto loss_at = [&](const std::vector<double>& p) {
    MlpState s = state;
    std::size_t at = 0;
    for (std::size_t l = 0; l < s.weights.size(); ++l) {
      for (Eigen::Index k = 0; k < s.weights[l].size(); ++k) s.weights[l].data()[k] = p[at++];
      for (Eigen::Index k = 0; k < s.biases[l].size(); ++k) s.biases[l](k) = p[at++];
    }
    return mlp_loss_and_gradient(s, x, y, nullptr);
  };
  const auto numeric = central_difference(loss_at, flat, 1e-6);
  double worst = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double scale = std::max({std::abs(numeric[i]), std::abs(analytic[i]), 1e-8});
    worst = std::max(worst, std::abs(numeric[i] - analytic[i]) / scale);
  }
  return worst;
}

}  // namespace cohort::testing
