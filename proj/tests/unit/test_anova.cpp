#include <gtest/gtest.h>

#include <cmath>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/features/feature_matrix.hpp"
#include "cohort/stats/anova.hpp"
#include "cohort/stats/distributions.hpp"
#include "oracles.hpp"

namespace cohort {
namespace {

using Groups = std::vector<std::vector<double>>;

Groups random_groups(Rng& rng) {
  const auto k = 2 + rng.index(4);
  Groups groups(k);
  for (std::size_t g = 0; g < k; ++g) {
    const auto n = 2 + rng.index(30);
    const double shift = rng.normal();
    for (std::size_t i = 0; i < n; ++i) groups[g].push_back(shift + 3.0 * rng.normal());
  }
  return groups;
}

FeatureMatrix matrix_from_columns(const std::vector<std::vector<double>>& columns, const std::vector<int>& labels) {
  FeatureMatrix m;
  m.values = Matrix(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    m.feature_names.push_back("f" + std::to_string(c));
    for (std::size_t r = 0; r < labels.size(); ++r) {
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
    }
  }
  m.labels = labels;
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  for (int c = 0; c < k; ++c) m.class_names.push_back("c" + std::to_string(c));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    m.groups.push_back("P" + std::to_string(r));
    m.sample_ids.push_back("S" + std::to_string(r));
  }
  return m;
}

TEST(Anova, HandExamples) {
  Groups same{{1, 2, 3}, {1, 2, 3}};
  auto r = one_way_anova(same);
  EXPECT_EQ(r.f_stat, 0.0);
  EXPECT_EQ(r.p_value, 1.0);

  Groups shifted{{1, 2, 3}, {2, 3, 4}};
  r = one_way_anova(shifted);
  EXPECT_DOUBLE_EQ(r.ss_between, 1.5);
  EXPECT_DOUBLE_EQ(r.ss_within, 4.0);
  EXPECT_DOUBLE_EQ(r.f_stat, 1.5);
  EXPECT_EQ(r.df_between, 1);
  EXPECT_EQ(r.df_within, 4);

  Groups separated{{0, 0}, {1, 1}};
  r = one_way_anova(separated);
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_TRUE(std::isinf(r.f_stat));
}

TEST(Anova, DegenerateInputs) {
  Groups one{{1, 2, 3}};
  EXPECT_THROW(one_way_anova(one), DataError);
  Groups empty{{1, 2}, {}};
  EXPECT_THROW(one_way_anova(empty), DataError);
  Groups singletons{{1}, {2}, {3}};
  EXPECT_THROW(one_way_anova(singletons), DataError);
}

TEST(Anova, MatchesSumsOfSquaresOracle) {
  Rng rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const auto groups = random_groups(rng);
    const auto r = one_way_anova(groups);
    const auto o = testing::anova_by_sums_of_squares(groups);
    EXPECT_NEAR(r.f_stat, o.f_stat, 1e-9 * std::max(1.0, o.f_stat));
    EXPECT_NEAR(r.ss_between, o.ss_between, 1e-9 * std::max(1.0, o.ss_between));
    EXPECT_NEAR(r.p_value, f_sf(o.f_stat, r.df_between, r.df_within), 1e-12);
  }
}

TEST(Anova, InvariantUnderAffineTransform) {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    auto groups = random_groups(rng);
    const auto before = one_way_anova(groups);
    const double a = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + 10 * rng.uniform());
    const double b = 100 * rng.normal();
    for (auto& g : groups) {
      for (auto& v : g) v = a * v + b;
    }
    const auto after = one_way_anova(groups);
    EXPECT_NEAR(after.f_stat, before.f_stat, 1e-8 * std::max(1.0, before.f_stat));
  }
}

TEST(Anova, PValueDecreasesWithF) {
  Rng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    Groups g{{0, 1, 2, 3}, {0, 1, 2, 3}};
    double previous = 1.0;
    for (int step = 1; step <= 10; ++step) {
      const double delta = 0.3 + rng.uniform();
      for (auto& v : g[1]) v += delta;
      const auto r = one_way_anova(g);
      EXPECT_LE(r.p_value, previous);
      previous = r.p_value;
    }
  }
}

TEST(KruskalWallis, HandExamples) {
  Groups same{{1, 2, 3}, {1, 2, 3}};
  EXPECT_NEAR(kruskal_wallis(same).h, 0.0, 1e-15);
  Groups split{{1, 2}, {3, 4}};
  const auto r = kruskal_wallis(split);
  EXPECT_NEAR(r.h, 2.4, 1e-12);
  EXPECT_EQ(r.df, 1);
  EXPECT_NEAR(r.p_value, chi2_sf(2.4, 1), 1e-15);
  Groups flat{{5, 5}, {5, 5, 5}};
  EXPECT_EQ(kruskal_wallis(flat).h, 0.0);
  EXPECT_EQ(kruskal_wallis(flat).p_value, 1.0);
}

TEST(KruskalWallis, InvariantUnderMonotoneTransform) {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    auto groups = random_groups(rng);
    for (auto& g : groups) {
      for (auto& v : g) v = std::round(v);
    }
    const auto before = kruskal_wallis(groups);
    for (auto& g : groups) {
      for (auto& v : g) v = std::exp(v / 4.0) + v * v * v;
    }
    const auto after = kruskal_wallis(groups);
    EXPECT_NEAR(after.h, before.h, 1e-10);
  }
}

TEST(SelectFeatures, ThresholdIsInclusive) {
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const auto m = matrix_from_columns({{1, 2, 3, 2, 3, 4}, {1, 2, 3, 2, 3, 9}}, labels);
  const double p = select_features(m, 0.5).per_feature[0].result.p_value;
  const auto at = select_features(m, p);
  EXPECT_EQ(at.per_feature[0].result.p_value, p);
  EXPECT_TRUE(at.per_feature[0].selected);
  EXPECT_NE(std::find(at.selected.begin(), at.selected.end(), "f0"), at.selected.end());
  const auto below = select_features(m, std::nextafter(p, 0.0));
  EXPECT_FALSE(below.per_feature[0].selected);
}

TEST(SelectFeatures, ConstantColumnsNeverSelectedAndOrderKept) {
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const auto m = matrix_from_columns({{0, 0, 1, 5, 5, 6}, {3, 3, 3, 3, 3, 3}, {0, 1, 0, 9, 8, 9}}, labels);
  const auto r = select_features(m, 1.0);
  EXPECT_EQ(r.selected, (std::vector<std::string>{"f0", "f2"}));
  EXPECT_FALSE(r.per_feature[1].selected);
  EXPECT_EQ(r.per_feature[1].result.f_stat, 0.0);
}

TEST(SelectFeatures, MissingCellsAreDropped) {
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const double nan = std::nan("");
  const auto m = matrix_from_columns({{1, 2, nan, 2, nan, 4}}, labels);
  const auto r = select_features(m, 1.0);
  Groups expected{{1, 2}, {2, 4}};
  EXPECT_DOUBLE_EQ(r.per_feature[0].result.f_stat, one_way_anova(expected).f_stat);
}

TEST(SelectFeatures, InvariantUnderColumnReordering) {
  Rng rng(104);
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(i % 3);
  std::vector<std::vector<double>> cols(6, std::vector<double>(40));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (int r = 0; r < 40; ++r) cols[c][r] = rng.normal() + 0.4 * static_cast<double>(c) * labels[r];
  }
  const auto m = matrix_from_columns(cols, labels);
  std::vector<std::string> order{"f3", "f0", "f5", "f1", "f4", "f2"};
  const auto a = select_features(m, 0.01);
  const auto b = select_features(m.select_columns(order), 0.01);
  for (const auto& fb : b.per_feature) {
    const auto it = std::find_if(a.per_feature.begin(), a.per_feature.end(),
                                 [&](const FeatureAnova& fa) { return fa.name == fb.name; });
    ASSERT_NE(it, a.per_feature.end());
    EXPECT_EQ(it->result.p_value, fb.result.p_value);
    EXPECT_EQ(it->selected, fb.selected);
  }
}

TEST(SelectFeatures, NoiseSelectedAtRoughlyAlpha) {
  Rng rng(105);
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) labels.push_back(i < 40 ? 0 : 1);
  std::vector<std::vector<double>> cols(2000, std::vector<double>(60));
  for (auto& c : cols) {
    for (auto& v : c) v = rng.normal();
  }
  const auto r = select_features(matrix_from_columns(cols, labels), 0.05);
  const double rate = static_cast<double>(r.selected.size()) / 2000.0;
  EXPECT_NEAR(rate, 0.05, 0.02);
}

TEST(SelectFeatures, CsvHasOneRowPerFeature) {
  const std::vector<int> labels{0, 0, 1, 1};
  const auto r = select_features(matrix_from_columns({{0, 1, 5, 6}, {1, 1, 1, 1}}, labels), 0.5);
  const auto csv = to_csv(r);
  EXPECT_EQ(csv.rfind("feature,F,p,selected\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

}  // namespace
}  // namespace cohort
