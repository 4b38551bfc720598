#include "cohort/learners/forest.hpp"

#include <cmath>
#include <limits>

#include "cohort/common/parallel.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/learners/model.hpp"
#include "learners/training.hpp"
#include "learners/tree_grow.hpp"

namespace cohort {

TrainedModel train_random_forest(const Matrix& x, const std::vector<int>& y, int n_classes, const ModelSpec& spec,
                                 ForestDiagnostics* diagnostics) {
  validate(spec);
  detail::check_training_input(x, y, n_classes);
  if (auto constant = detail::constant_if_degenerate(spec, x, y, n_classes)) return *constant;

  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = static_cast<int>(x.cols());
  detail::ClassificationGrowth growth;
  growth.n_classes = n_classes;
  growth.max_features = spec.params.max_features > 0
                            ? std::min(spec.params.max_features, d)
                            : std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)))));
  growth.max_depth = spec.params.max_depth;

  const auto trees = static_cast<std::size_t>(spec.params.trees);
  ForestState state;
  state.trees.resize(trees);
  std::vector<double> oob(trees, std::numeric_limits<double>::quiet_NaN());
  parallel_for(trees, [&](std::size_t t) {
    Rng rng(derive_seed(spec.seed, t));
    std::vector<std::size_t> sample(n);
    std::vector<char> in_bag(n, 0);
    for (auto& s : sample) {
      s = rng.index(n);
      in_bag[s] = 1;
    }
    state.trees[t] = detail::grow_classification_tree(x, y, sample, growth, rng);
    long hits = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_bag[i]) continue;
      ++total;
      hits += static_cast<int>(state.trees[t].predict(x.row(static_cast<Eigen::Index>(i)).data())) == y[i];
    }
    if (total > 0) oob[t] = static_cast<double>(hits) / static_cast<double>(total);
  });
  if (diagnostics) diagnostics->oob_accuracy = std::move(oob);

  auto model = detail::model_shell(spec, x, n_classes);
  model.state = std::move(state);
  return model;
}

}  // namespace cohort
