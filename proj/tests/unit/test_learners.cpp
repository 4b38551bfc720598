#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/learners/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cohort {
namespace {

using testing::gaussian_blobs;

double accuracy(const std::vector<int>& truth, const std::vector<int>& predicted) {
  long hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ModelSpec quick(ModelKind kind, std::uint64_t seed = 7) {
  auto spec = ModelSpec::defaults(kind, seed);
  spec.params.estimators = 100;
  return spec;
}

void expect_rows_normalised(const Matrix& scores) {
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    EXPECT_NEAR(scores.row(i).sum(), 1.0, 1e-9);
    EXPECT_GE(scores.row(i).minCoeff(), 0.0);
  }
}

class EveryKind : public ::testing::TestWithParam<ModelKind> {};

TEST_P(EveryKind, SeparatesBlobsOnHeldOutData) {
  const auto train = gaussian_blobs(200, 2, 2, 5.0, 0.1, 11);
  const auto test = gaussian_blobs(200, 2, 2, 5.0, 0.1, 12);
  const auto model = train_model(quick(GetParam()), train.x, train.y, 2);
  EXPECT_EQ(accuracy(test.y, predict_labels(model, test.x)), 1.0);
}

TEST_P(EveryKind, ScoresAreNormalised) {
  const auto data = gaussian_blobs(90, 3, 3, 2.0, 1.0, 5);
  auto spec = quick(GetParam());
  spec.params.epochs = 5;
  const auto model = train_model(spec, data.x, data.y, 3);
  const auto probe = gaussian_blobs(50, 3, 3, 2.0, 3.0, 6);
  expect_rows_normalised(predict_scores(model, probe.x));
}

TEST_P(EveryKind, SameInputsGiveIdenticalModels) {
  const auto data = gaussian_blobs(60, 2, 2, 1.0, 1.0, 3);
  auto spec = quick(GetParam(), 99);
  spec.params.epochs = 5;
  const auto a = train_model(spec, data.x, data.y, 2);
  const auto b = train_model(spec, data.x, data.y, 2);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(predict_scores(a, data.x), predict_scores(b, data.x));
}

TEST_P(EveryKind, SingleClassGivesConstantModel) {
  Matrix x = Matrix::Random(10, 3);
  const std::vector<int> y(10, 1);
  const auto model = train_model(quick(GetParam()), x, y, 3);
  EXPECT_TRUE(std::holds_alternative<ConstantState>(model.state));
  const Matrix scores = predict_scores(model, Matrix::Random(4, 3));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    EXPECT_EQ(scores(i, 1), 1.0);
    EXPECT_EQ(scores.row(i), scores.row(0));
  }
}

TEST_P(EveryKind, RejectsWrongDimensionality) {
  const auto data = gaussian_blobs(20, 2, 2, 3.0, 0.5, 1);
  auto spec = quick(GetParam());
  spec.params.epochs = 1;
  const auto model = train_model(spec, data.x, data.y, 2);
  EXPECT_THROW(predict_scores(model, Matrix::Zero(3, 5)), DataError);
}

INSTANTIATE_TEST_SUITE_P(Learners, EveryKind,
                         ::testing::Values(ModelKind::RandomForest, ModelKind::GradientBoosting, ModelKind::SvmRbf,
                                           ModelKind::Mlp),
                         [](const auto& info) { return to_string(info.param); });

TEST(TrainModel, RejectsBadInput) {
  Matrix x = Matrix::Zero(3, 2);
  EXPECT_THROW(train_model(quick(ModelKind::RandomForest), x, {0, 1}, 2), DataError);
  EXPECT_THROW(train_model(quick(ModelKind::RandomForest), x, {0, 1, 2}, 2), DataError);
  x(0, 0) = std::nan("");
  EXPECT_THROW(train_model(quick(ModelKind::RandomForest), x, {0, 1, 0}, 2), DataError);
}

TEST(Argmax, TiesGoToLowestClass) {
  Matrix s(2, 3);
  s << 0.4, 0.4, 0.2, 0.2, 0.4, 0.4;
  EXPECT_EQ(argmax_rows(s), (std::vector<int>{0, 1}));
}

// ---------------------------------------------------------------------------

TEST(RandomForest, ScoresAreVoteFractions) {
  const auto data = gaussian_blobs(80, 2, 2, 1.0, 1.0, 8);
  auto spec = quick(ModelKind::RandomForest);
  const auto model = train_model(spec, data.x, data.y, 2);
  const auto& forest = std::get<ForestState>(model.state);
  ASSERT_EQ(forest.trees.size(), 100u);
  const Matrix scores = predict_scores(model, data.x);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int votes = 0;
    for (const auto& t : forest.trees) votes += t.predict(data.x.row(i).data()) == 1.0;
    EXPECT_DOUBLE_EQ(scores(i, 1), votes / 100.0);
  }
}

TEST(RandomForest, TreesAreGrownToPurity) {
  const auto data = gaussian_blobs(60, 3, 2, 0.5, 1.0, 4);
  ForestDiagnostics diag;
  auto spec = quick(ModelKind::RandomForest);
  spec.params.trees = 5;
  const auto model = train_random_forest(data.x, data.y, 2, spec, &diag);
  // Each tree fits its bootstrap sample exactly; on distinct inputs that means
  // every training row inside the bag is classified correctly.
  EXPECT_EQ(diag.oob_accuracy.size(), 5u);
  const auto& forest = std::get<ForestState>(model.state);
  for (const auto& t : forest.trees) EXPECT_GT(t.depth(), 1);
}

TEST(RandomForest, TrainingAccuracyBeatsMeanTreeOutOfBagAccuracy) {
  double train_acc = 0.0, oob = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = gaussian_blobs(120, 4, 2, 1.0, 1.0, 100 + seed);
    ForestDiagnostics diag;
    const auto model = train_random_forest(data.x, data.y, 2, quick(ModelKind::RandomForest, seed), &diag);
    train_acc += accuracy(data.y, predict_labels(model, data.x));
    double sum = 0.0;
    for (const double a : diag.oob_accuracy) sum += a;
    oob += sum / static_cast<double>(diag.oob_accuracy.size());
  }
  EXPECT_GE(train_acc, oob);
}

TEST(GradientBoosting, ZeroStagesGiveClassPriors) {
  const auto data = gaussian_blobs(40, 2, 2, 1.0, 1.0, 2);
  std::vector<int> y = data.y;
  y[1] = 0;
  y[3] = 0;  // 22 of class 0, 18 of class 1
  auto spec = quick(ModelKind::GradientBoosting);
  spec.params.estimators = 0;
  const auto model = train_model(spec, data.x, y, 2);
  const Matrix scores = predict_scores(model, data.x);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    EXPECT_NEAR(scores(i, 0), 22.0 / 40.0, 1e-12);
    EXPECT_NEAR(scores(i, 1), 18.0 / 40.0, 1e-12);
  }
}

TEST(GradientBoosting, TrainingLossNeverIncreases) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    // Heavily overlapping classes so the fit is far from perfect.
    const auto data = gaussian_blobs(150, 3, 3, 0.3, 1.0, seed);
    BoostingDiagnostics diag;
    auto spec = quick(ModelKind::GradientBoosting, seed);
    spec.params.estimators = 200;
    train_gradient_boosting(data.x, data.y, 3, spec, &diag);
    ASSERT_GE(diag.train_loss.size(), 2u);
    for (std::size_t s = 1; s < diag.train_loss.size(); ++s) {
      EXPECT_LE(diag.train_loss[s], diag.train_loss[s - 1]) << "stage " << s << " seed " << seed;
    }
  }
}

TEST(GradientBoosting, TreesRespectDepthLimit) {
  const auto data = gaussian_blobs(100, 3, 2, 0.5, 1.0, 9);
  auto spec = quick(ModelKind::GradientBoosting);
  spec.params.estimators = 10;
  spec.params.max_depth = 2;
  const auto model = train_model(spec, data.x, data.y, 2);
  for (const auto& stage : std::get<BoostingState>(model.state).stages) {
    for (const auto& t : stage) EXPECT_LE(t.depth(), 2);
  }
}

TEST(Svm, KernelOfPointWithItselfIsOne) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const double x[3] = {rng.normal(0, 10), rng.normal(0, 10), rng.normal(0, 10)};
    EXPECT_EQ(rbf_kernel(x, x, 3, rng.uniform(1e-4, 10.0)), 1.0);
  }
}

TEST(Svm, TwoPointsAreBothSupportVectorsAndSplitByBisector) {
  Matrix x(2, 2);
  x << 0.0, 0.0, 4.0, 2.0;
  auto spec = ModelSpec::defaults(ModelKind::SvmRbf);
  spec.params.gamma = 0.1;
  const auto model = train_model(spec, x, {0, 1}, 2);
  const auto& svm = std::get<SvmState>(model.state);
  ASSERT_EQ(svm.machines.size(), 1u);
  EXPECT_EQ(svm.machines[0].coef.size(), 2u);

  // Points along the segment flip class at its midpoint (2, 1).
  Matrix probe(4, 2);
  probe << 0.5, 0.25, 1.9, 0.95, 2.1, 1.05, 3.5, 1.75;
  const Matrix decision = svm_decision_values(svm, probe);
  EXPECT_LT(decision(0, 0), 0.0);
  EXPECT_LT(decision(1, 0), 0.0);
  EXPECT_GT(decision(2, 0), 0.0);
  EXPECT_GT(decision(3, 0), 0.0);
  Matrix mid(1, 2);
  mid << 2.0, 1.0;
  EXPECT_NEAR(svm_decision_values(svm, mid)(0, 0), 0.0, 1e-9);
}

TEST(Svm, DualObjectiveIsNonDecreasing) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = gaussian_blobs(120, 3, 3, 0.8, 1.0, 50 + seed);
    auto spec = ModelSpec::defaults(ModelKind::SvmRbf, seed);
    spec.params.gamma = 0.5;
    SvmDiagnostics diag;
    train_svm_rbf(data.x, data.y, 3, spec, &diag);
    ASSERT_EQ(diag.dual_objective.size(), 3u);
    for (const auto& trace : diag.dual_objective) {
      ASSERT_GT(trace.size(), 2u);
      for (std::size_t t = 1; t < trace.size(); ++t) {
        EXPECT_GE(trace[t], trace[t - 1] - 1e-12 * std::max(1.0, std::abs(trace[t - 1])));
      }
    }
    for (const double v : diag.final_violation) EXPECT_LT(v, spec.params.tolerance);
  }
}

TEST(Svm, IterationCapRaisesWithViolation) {
  const auto data = gaussian_blobs(100, 2, 2, 0.5, 1.0, 4);
  auto spec = ModelSpec::defaults(ModelKind::SvmRbf);
  spec.params.max_iterations = 3;
  try {
    train_model(spec, data.x, data.y, 2);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("KKT violation"), std::string::npos);
  }
}

TEST(Svm, PlattCurveIsMonotoneInDecisionValue) {
  const auto data = gaussian_blobs(100, 2, 2, 2.0, 1.0, 6);
  const auto model = train_model(ModelSpec::defaults(ModelKind::SvmRbf), data.x, data.y, 2);
  const auto& m = std::get<SvmState>(model.state).machines[0];
  EXPECT_LT(m.platt_a, 0.0);
}

TEST(Mlp, GradientMatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto state = init_mlp(2, 2, 1, 2, seed);
    Matrix x(6, 2);
    std::vector<int> y;
    for (Eigen::Index i = 0; i < 6; ++i) {
      x(i, 0) = rng.normal();
      x(i, 1) = rng.normal();
      y.push_back(static_cast<int>(rng.index(2)));
    }
    EXPECT_LT(testing::mlp_gradient_check(state, x, y), 1e-4) << "seed " << seed;
  }
}

TEST(Mlp, SolvesXor) {
  const auto data = testing::xor_data(50, 0.05, 21);
  auto spec = ModelSpec::defaults(ModelKind::Mlp, 3);
  spec.params.layers = 1;
  spec.params.units = 16;
  spec.params.learning_rate = 0.01;
  spec.params.dropout = 0.0;
  spec.params.epochs = 200;
  spec.params.batch_size = 20;
  const auto model = train_model(spec, data.x, data.y, 2);
  EXPECT_EQ(accuracy(data.y, predict_labels(model, data.x)), 1.0);
}

TEST(Mlp, ZeroEpochsStillGivesDistributions) {
  const auto data = gaussian_blobs(30, 4, 3, 1.0, 1.0, 2);
  auto spec = ModelSpec::defaults(ModelKind::Mlp);
  spec.params.epochs = 0;
  spec.params.units = 8;
  const auto model = train_model(spec, data.x, data.y, 3);
  expect_rows_normalised(predict_scores(model, data.x));
}

TEST(Mlp, WithoutDropoutLossTraceIsReproducible) {
  const auto data = gaussian_blobs(64, 3, 2, 1.0, 1.0, 5);
  auto spec = ModelSpec::defaults(ModelKind::Mlp, 42);
  spec.params.dropout = 0.0;
  spec.params.units = 32;
  spec.params.epochs = 10;
  spec.params.learning_rate = 0.001;
  MlpDiagnostics a, b;
  train_mlp(data.x, data.y, 2, spec, &a);
  train_mlp(data.x, data.y, 2, spec, &b);
  ASSERT_EQ(a.epoch_loss.size(), 10u);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
}

TEST(Mlp, DivergenceIsReported) {
  const auto data = gaussian_blobs(50, 2, 2, 1e6, 1e5, 5);
  auto spec = ModelSpec::defaults(ModelKind::Mlp);
  spec.params.layers = 1;
  spec.params.units = 4;
  spec.params.learning_rate = 1e308;
  spec.params.epochs = 5;
  try {
    train_model(spec, data.x, data.y, 2);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("learning_rate"), std::string::npos);
  }
}

TEST(ModelSpec, HyperparametersAreValidated) {
  Hyperparameters p;
  set_hyperparameter(p, "trees", 12);
  EXPECT_EQ(p.trees, 12);
  set_hyperparameter(p, "depth", 3);
  EXPECT_EQ(p.max_depth, 3);
  EXPECT_THROW(set_hyperparameter(p, "trees", 0), ConfigError);
  EXPECT_THROW(set_hyperparameter(p, "trees", 2.5), ConfigError);
  EXPECT_THROW(set_hyperparameter(p, "dropout", 1.0), ConfigError);
  EXPECT_THROW(set_hyperparameter(p, "momentum", 0.9), ConfigError);
  EXPECT_EQ(parse_model_kind("gb"), ModelKind::GradientBoosting);
  EXPECT_THROW(parse_model_kind("knn"), ConfigError);
}

}  // namespace
}  // namespace cohort
