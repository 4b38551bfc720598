#include "cohort/learners/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cohort/common/error.hpp"
#include "cohort/common/parallel.hpp"
#include "cohort/learners/model.hpp"
#include "common/log.hpp"
#include "learners/training.hpp"

namespace cohort {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix kernel_matrix(const Matrix& a, const Matrix& b, double gamma) {
  const Vector na = a.rowwise().squaredNorm();
  const Vector nb = b.rowwise().squaredNorm();
  Matrix k = -2.0 * (a * b.transpose());
  k.colwise() += na;
  k.rowwise() += nb.transpose();
  return (-gamma * k.array().max(0.0)).exp().matrix();
}

struct SmoResult {
  std::vector<double> alpha;
  double rho = 0.0;
  std::vector<double> objective;
  long iterations = 0;
  double violation = 0.0;
};

// Minimises 0.5 a'Qa - e'a subject to 0 <= a <= C, y'a = 0, where
// Q_ij = y_i y_j K_ij.
SmoResult solve_smo(const Matrix& kernel, const std::vector<double>& y, double c, double tolerance, long cap) {
  const auto n = y.size();
  SmoResult out;
  std::vector<double>& alpha = out.alpha;
  alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto q = [&](std::size_t i, std::size_t j) {
    return y[i] * y[j] * kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  auto upper = [&](std::size_t i) { return alpha[i] >= c; };
  auto lower = [&](std::size_t i) { return alpha[i] <= 0.0; };
  auto dual = [&] {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) f += alpha[i] * (grad[i] - 1.0);
    return -0.5 * f;
  };
  out.objective.push_back(0.0);

  for (;;) {
    double gmax = -kInf, gmax2 = -kInf;
    std::ptrdiff_t pick_i = -1, pick_j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!upper(t) && -grad[t] >= gmax) { gmax = -grad[t]; pick_i = static_cast<std::ptrdiff_t>(t); }
      } else {
        if (!lower(t) && grad[t] >= gmax) { gmax = grad[t]; pick_i = static_cast<std::ptrdiff_t>(t); }
      }
    }
    double best_drop = kInf;
    if (pick_i >= 0) {
      const auto i = static_cast<std::size_t>(pick_i);
      for (std::size_t t = 0; t < n; ++t) {
        double grad_diff = 0.0, quad = 0.0;
        if (y[t] > 0) {
          if (lower(t)) continue;
          grad_diff = gmax + grad[t];
          gmax2 = std::max(gmax2, grad[t]);
          quad = 2.0 - 2.0 * y[i] * q(i, t);
        } else {
          if (upper(t)) continue;
          grad_diff = gmax - grad[t];
          gmax2 = std::max(gmax2, -grad[t]);
          quad = 2.0 + 2.0 * y[i] * q(i, t);
        }
        if (grad_diff > 0.0) {
          const double drop = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
          if (drop <= best_drop) { best_drop = drop; pick_j = static_cast<std::ptrdiff_t>(t); }
        }
      }
    }
    out.violation = gmax + gmax2;
    if (pick_i < 0 || pick_j < 0 || out.violation < tolerance) break;
    if (out.iterations >= cap) {
      std::ostringstream msg;
      msg << "SMO did not converge within " << cap << " iterations (KKT violation " << out.violation
          << ", tolerance " << tolerance << ")";
      throw NumericError(msg.str());
    }
    ++out.iterations;

    const auto i = static_cast<std::size_t>(pick_i), j = static_cast<std::size_t>(pick_j);
    const double old_i = alpha[i], old_j = alpha[j];
    const double qij = q(i, j);
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      double quad = 2.0 - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * di + q(j, t) * dj;
    out.objective.push_back(dual());
  }

  double ub = kInf, lb = -kInf, free_sum = 0.0;
  long free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  out.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;
  return out;
}

BinarySvm fit_machine(const Matrix& x, const Matrix& kernel, const std::vector<int>& labels, int positive,
                      const Hyperparameters& p, long cap, std::vector<double>* objective, long* iterations,
                      double* violation) {
  const auto n = labels.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == positive ? 1.0 : -1.0;
  auto solved = solve_smo(kernel, y, p.c, p.tolerance, cap);

  BinarySvm m;
  m.positive_class = positive;
  m.rho = solved.rho;
  std::vector<Eigen::Index> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (solved.alpha[i] > 0.0) {
      support.push_back(static_cast<Eigen::Index>(i));
      m.coef.push_back(solved.alpha[i] * y[i]);
    }
  }
  m.support_vectors.resize(static_cast<Eigen::Index>(support.size()), x.cols());
  for (std::size_t s = 0; s < support.size(); ++s) m.support_vectors.row(static_cast<Eigen::Index>(s)) = x.row(support[s]);

  std::vector<double> decision(n);
  std::vector<bool> is_positive(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = -m.rho;
    for (std::size_t s = 0; s < support.size(); ++s) f += m.coef[s] * kernel(support[s], static_cast<Eigen::Index>(i));
    decision[i] = f;
    is_positive[i] = y[i] > 0;
  }
  std::tie(m.platt_a, m.platt_b) = fit_platt(decision, is_positive);
  if (objective) *objective = std::move(solved.objective);
  if (iterations) *iterations = solved.iterations;
  if (violation) *violation = solved.violation;
  return m;
}

double sigmoid_of(double a, double b, double f) {
  const double z = a * f + b;
  return z >= 0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
}

}  // namespace

double rbf_kernel(const double* a, const double* b, Eigen::Index d, double gamma) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * sq);
}

std::pair<double, double> fit_platt(const std::vector<double>& decision, const std::vector<bool>& positive) {
  const auto n = decision.size();
  double prior1 = 0.0, prior0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) (positive[i] ? prior1 : prior0) += 1.0;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = positive[i] ? hi : lo;

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10, kSigma = 1e-12, kEps = 1e-5;
  double a = 0.0, b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto objective = [&](double aa, double bb) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = decision[i] * aa + bb;
      f += z >= 0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  };
  double fval = objective(a, b);
  for (int it = 0; it < kMaxIter; ++it) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = decision[i] * a + b;
      double p, q;
      if (z >= 0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += decision[i] * decision[i] * d2;
      h22 += d2;
      h21 += decision[i] * d2;
      const double d1 = t[i] - p;
      g1 += decision[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da, nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return {a, b};
}

Matrix svm_decision_values(const SvmState& state, const Matrix& x) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(state.machines.size()));
  for (std::size_t m = 0; m < state.machines.size(); ++m) {
    const auto& machine = state.machines[m];
    const Matrix k = kernel_matrix(x, machine.support_vectors, state.gamma);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double f = -machine.rho;
      for (std::size_t s = 0; s < machine.coef.size(); ++s) f += machine.coef[s] * k(i, static_cast<Eigen::Index>(s));
      out(i, static_cast<Eigen::Index>(m)) = f;
    }
  }
  return out;
}

TrainedModel train_svm_rbf(const Matrix& x, const std::vector<int>& y, int n_classes, const ModelSpec& spec,
                           SvmDiagnostics* diagnostics) {
  validate(spec);
  detail::check_training_input(x, y, n_classes);
  if (auto constant = detail::constant_if_degenerate(spec, x, y, n_classes)) return *constant;

  const auto n = static_cast<long>(x.rows());
  const long cap = spec.params.max_iterations > 0 ? spec.params.max_iterations : std::max(10'000'000L, 100 * n);
  const Matrix kernel = kernel_matrix(x, x, spec.params.gamma);

  std::vector<int> positives;
  if (n_classes == 2) {
    positives.push_back(1);
  } else {
    std::vector<char> present(static_cast<std::size_t>(n_classes), 0);
    for (const int label : y) present[static_cast<std::size_t>(label)] = 1;
    for (int c = 0; c < n_classes; ++c) {
      if (present[static_cast<std::size_t>(c)]) positives.push_back(c);
    }
  }

  SvmState state;
  state.gamma = spec.params.gamma;
  state.machines.resize(positives.size());
  SvmDiagnostics diag;
  diag.dual_objective.resize(positives.size());
  diag.iterations.resize(positives.size());
  diag.final_violation.resize(positives.size());
  parallel_for(positives.size(), [&](std::size_t m) {
    state.machines[m] = fit_machine(x, kernel, y, positives[m], spec.params, cap, &diag.dual_objective[m],
                                    &diag.iterations[m], &diag.final_violation[m]);
  });
  detail::logger().debug("svm trained {} machine(s) on {} rows", positives.size(), n);
  if (diagnostics) *diagnostics = std::move(diag);

  auto model = detail::model_shell(spec, x, n_classes);
  model.state = std::move(state);
  return model;
}

namespace detail {

Matrix svm_scores(const SvmState& state, const Matrix& x, int n_classes) {
  const Matrix decision = svm_decision_values(state, x);
  Matrix scores = Matrix::Zero(x.rows(), n_classes);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (state.machines.size() == 1 && n_classes == 2) {
      const auto& m = state.machines.front();
      const double p = sigmoid_of(m.platt_a, m.platt_b, decision(i, 0));
      scores(i, m.positive_class) = p;
      scores(i, 1 - m.positive_class) = 1.0 - p;
      continue;
    }
    double total = 0.0;
    for (std::size_t m = 0; m < state.machines.size(); ++m) {
      const auto& machine = state.machines[m];
      const double p = sigmoid_of(machine.platt_a, machine.platt_b, decision(i, static_cast<Eigen::Index>(m)));
      scores(i, machine.positive_class) = p;
      total += p;
    }
    if (total > 0.0) {
      scores.row(i) /= total;
    } else {
      scores.row(i).setConstant(1.0 / n_classes);
    }
  }
  return scores;
}

}  // namespace detail
}  // namespace cohort
