#include "cohort/learners/boosting.hpp"

#include <cmath>
#include <numeric>

#include "cohort/learners/model.hpp"
#include "common/log.hpp"
#include "learners/training.hpp"
#include "learners/tree_grow.hpp"

namespace cohort {
namespace {

constexpr double kMinLogPrior = -700.0;

void softmax_rows(const Matrix& margins, Matrix& probs) {
  probs.resize(margins.rows(), margins.cols());
  for (Eigen::Index i = 0; i < margins.rows(); ++i) {
    const double top = margins.row(i).maxCoeff();
    probs.row(i) = (margins.row(i).array() - top).exp();
    probs.row(i) /= probs.row(i).sum();
  }
}

double mean_log_loss(const Matrix& margins, const std::vector<int>& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.rows(); ++i) {
    const double top = margins.row(i).maxCoeff();
    const double lse = top + std::log((margins.row(i).array() - top).exp().sum());
    total += lse - margins(i, y[static_cast<std::size_t>(i)]);
  }
  return total / static_cast<double>(margins.rows());
}

}  // namespace

Matrix boosting_margins(const BoostingState& state, const Matrix& x, int stages) {
  const auto k = static_cast<Eigen::Index>(state.initial.size());
  Matrix out(x.rows(), k);
  const std::size_t use =
      stages < 0 ? state.stages.size() : std::min(state.stages.size(), static_cast<std::size_t>(stages));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double* row = x.row(i).data();
    for (Eigen::Index c = 0; c < k; ++c) {
      double m = state.initial[static_cast<std::size_t>(c)];
      for (std::size_t s = 0; s < use; ++s) m += state.step[s] * state.stages[s][static_cast<std::size_t>(c)].predict(row);
      out(i, c) = m;
    }
  }
  return out;
}

TrainedModel train_gradient_boosting(const Matrix& x, const std::vector<int>& y, int n_classes,
                                     const ModelSpec& spec, BoostingDiagnostics* diagnostics) {
  validate(spec);
  detail::check_training_input(x, y, n_classes);
  if (auto constant = detail::constant_if_degenerate(spec, x, y, n_classes)) return *constant;

  const auto n = static_cast<std::size_t>(x.rows());
  const auto k = static_cast<std::size_t>(n_classes);
  BoostingState state;
  std::vector<double> counts(k, 0.0);
  for (const int label : y) counts[static_cast<std::size_t>(label)] += 1.0;
  for (const double c : counts) {
    state.initial.push_back(c > 0 ? std::log(c / static_cast<double>(n)) : kMinLogPrior);
  }

  Matrix margins(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) margins(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = state.initial[c];
  }
  double loss = mean_log_loss(margins, y);
  BoostingDiagnostics diag;
  diag.train_loss.push_back(loss);

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  Matrix probs;
  std::vector<double> residual(n);
  Matrix update(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  const double newton_scale = static_cast<double>(k - 1) / static_cast<double>(k);
  const double lr = spec.params.learning_rate;

  for (int stage = 0; stage < spec.params.estimators; ++stage) {
    softmax_rows(margins, probs);
    std::vector<DecisionTree> trees;
    trees.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        residual[i] = (y[i] == static_cast<int>(c) ? 1.0 : 0.0) - probs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      }
      const detail::LeafValue newton = [&](std::span<const std::size_t> rows) {
        double num = 0.0, den = 0.0;
        for (const auto r : rows) {
          num += residual[r];
          den += std::abs(residual[r]) * (1.0 - std::abs(residual[r]));
        }
        return den < 1e-150 ? 0.0 : newton_scale * num / den;
      };
      trees.push_back(detail::grow_regression_tree(x, residual, all, spec.params.max_depth, newton));
      for (std::size_t i = 0; i < n; ++i) {
        update(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
            trees.back().predict(x.row(static_cast<Eigen::Index>(i)).data());
      }
    }

    double step = lr;
    double next_loss = mean_log_loss(margins + step * update, y);
    int halvings = 0;
    while (next_loss > loss && halvings < 10) {
      step /= 2.0;
      ++halvings;
      next_loss = mean_log_loss(margins + step * update, y);
    }
    if (next_loss > loss) {
      detail::logger().debug("boosting stalled at stage {} (loss {})", stage, loss);
      diag.stalled = true;
      break;
    }
    if (halvings > 0) ++diag.backtracked_stages;
    margins += step * update;
    loss = next_loss;
    diag.train_loss.push_back(loss);
    state.stages.push_back(std::move(trees));
    state.step.push_back(step);
  }
  if (diagnostics) *diagnostics = std::move(diag);

  auto model = detail::model_shell(spec, x, n_classes);
  model.state = std::move(state);
  return model;
}

}  // namespace cohort
