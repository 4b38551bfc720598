#include <benchmark/benchmark.h>

#include "cohort/common/rng.hpp"
#include "cohort/corpus/synthetic.hpp"
#include "cohort/features/extract.hpp"
#include "cohort/learners/forest.hpp"
#include "cohort/learners/model.hpp"
#include "cohort/pipeline/pipeline.hpp"
#include "cohort/resample/adasyn.hpp"
#include "cohort/stats/distributions.hpp"

using namespace cohort;

namespace {

void BM_FCdf(benchmark::State& state) {
  const int d2 = static_cast<int>(state.range(0));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_cdf(x, 3, d2));
    x = x < 20.0 ? x * 1.01 : 0.1;
  }
}
BENCHMARK(BM_FCdf)->Arg(10)->Arg(100)->Arg(1000);

void BM_Adasyn(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  Matrix x(n, 40);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = i % 5 == 0 ? 1 : 0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal() + y[static_cast<std::size_t>(i)];
  }
  for (auto _ : state) benchmark::DoNotOptimize(adasyn(x, y, AdasynParams{}));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Adasyn)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_RandomForest(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(2);
  Matrix x(n, 30);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = static_cast<int>(i % 2);
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal() + 0.3 * y[static_cast<std::size_t>(i)];
  }
  const auto spec = ModelSpec::defaults(ModelKind::RandomForest, 3);
  for (auto _ : state) benchmark::DoNotOptimize(train_random_forest(x, y, 2, spec));
}
BENCHMARK(BM_RandomForest)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Extraction(benchmark::State& state) {
  SyntheticCohortSpec spec;
  spec.control = static_cast<int>(state.range(0));
  spec.impaired = spec.control / 4;
  const auto dataset = generate_synthetic_cohort(spec, 4);
  std::vector<std::size_t> rows(dataset.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const LexiconSet lexicons;
  const auto registry = job_registry(dataset, rows, lexicons);
  for (auto _ : state) benchmark::DoNotOptimize(extract_matrix(dataset, registry, lexicons));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(dataset.size()));
}
BENCHMARK(BM_Extraction)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
