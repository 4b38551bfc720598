#include <gtest/gtest.h>

#include <cstring>
#include <numeric>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/resample/adasyn.hpp"
#include "oracles.hpp"

namespace cohort {
namespace {

struct Instance {
  Matrix x;
  std::vector<int> y;
};

// Majority class 0, minority class 1, overlapping so most minority rows see
// majority neighbours.
Instance imbalanced(Rng& rng) {
  const auto majority = 10 + rng.index(40);
  const auto minority = 3 + rng.index(majority / 2);
  const auto dims = 1 + rng.index(4);
  Instance inst;
  inst.x = Matrix(static_cast<Eigen::Index>(majority + minority), static_cast<Eigen::Index>(dims));
  for (std::size_t i = 0; i < majority + minority; ++i) {
    const bool minor = i >= majority;
    inst.y.push_back(minor ? 1 : 0);
    for (std::size_t j = 0; j < dims; ++j) {
      inst.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (minor ? 1.0 : 0.0) + rng.normal() * 100.0 * (j + 1);
    }
  }
  return inst;
}

std::size_t count(const std::vector<int>& y, int c) { return static_cast<std::size_t>(std::count(y.begin(), y.end(), c)); }

bool bitwise_equal_rows(const Matrix& a, const Matrix& b, Eigen::Index rows) {
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::memcmp(&a(i, j), &b(i, j), sizeof(double)) != 0) return false;
    }
  }
  return true;
}

TEST(Adasyn, HandTracedOneDimensionalExample) {
  Matrix x(6, 1);
  x << 0.0, 1.0, 0.5, 1.6, 3.0, 4.0;
  const std::vector<int> y{1, 1, 0, 0, 0, 0};
  AdasynParams p;
  p.k = 3;
  p.beta = 1.0;
  p.seed = 7;
  const auto out = adasyn(x, y, p);
  EXPECT_EQ(out.synthetic_count(), 2u);
  EXPECT_EQ(out.per_seed_counts.at(0), 1u);
  EXPECT_EQ(out.per_seed_counts.at(1), 1u);
  for (Eigen::Index i = 6; i < out.features.rows(); ++i) {
    EXPECT_GE(out.features(i, 0), 0.0);
    EXPECT_LE(out.features(i, 0), 1.0);
    EXPECT_EQ(out.labels[static_cast<std::size_t>(i)], 1);
  }
}

TEST(Adasyn, RandomInstancesKeepInvariants) {
  Rng rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = imbalanced(rng);
    AdasynParams p;
    p.k = 1 + rng.index(5);
    p.seed = rng.index(1000);
    const auto out = adasyn(inst.x, inst.y, p);
    const auto n = static_cast<Eigen::Index>(inst.y.size());

    EXPECT_EQ(count(out.labels, 0), count(out.labels, 1));
    ASSERT_GE(out.features.rows(), n);
    EXPECT_TRUE(bitwise_equal_rows(out.features, inst.x, n));
    for (Eigen::Index i = 0; i < n; ++i) {
      EXPECT_FALSE(out.synthetic_flags[static_cast<std::size_t>(i)]);
      EXPECT_EQ(out.labels[static_cast<std::size_t>(i)], inst.y[static_cast<std::size_t>(i)]);
    }

    std::size_t total = 0;
    for (const auto& [row, g] : out.per_seed_counts) {
      EXPECT_EQ(inst.y[row], 1);
      total += g;
    }
    EXPECT_EQ(total, out.synthetic_count());
    EXPECT_EQ(total, count(inst.y, 0) - count(inst.y, 1));

    for (Eigen::Index s = n; s < out.features.rows(); ++s) {
      const auto src = out.source_rows[static_cast<std::size_t>(s)];
      EXPECT_TRUE(out.synthetic_flags[static_cast<std::size_t>(s)]);
      EXPECT_EQ(inst.y[src], 1);
      const Vector point = out.features.row(s).transpose();
      const Vector base = inst.x.row(static_cast<Eigen::Index>(src)).transpose();
      bool found = false;
      for (Eigen::Index z = 0; z < n && !found; ++z) {
        if (inst.y[static_cast<std::size_t>(z)] != 1 || z == static_cast<Eigen::Index>(src)) continue;
        found = testing::interpolation_lambda(base, inst.x.row(z).transpose(), point, 1e-9).has_value();
      }
      EXPECT_TRUE(found) << "synthetic row " << s << " is not between its seed and a minority row";
    }
  }
}

TEST(Adasyn, BalancedInputIsUnchanged) {
  Matrix x(4, 1);
  x << 0, 1, 2, 3;
  const std::vector<int> y{0, 1, 0, 1};
  AdasynParams p;
  p.k = 2;
  const auto out = adasyn(x, y, p);
  EXPECT_EQ(out.synthetic_count(), 0u);
  EXPECT_TRUE(out.features.cwiseEqual(x).all());
  EXPECT_EQ(out.labels, y);
}

TEST(Adasyn, BetaScalesTheGap) {
  Rng rng(51);
  const auto inst = imbalanced(rng);
  AdasynParams p;
  p.beta = 0.5;
  p.k = 3;
  const auto out = adasyn(inst.x, inst.y, p);
  const auto gap = static_cast<double>(count(inst.y, 0) - count(inst.y, 1));
  EXPECT_EQ(out.synthetic_count(), static_cast<std::size_t>(std::llround(gap * 0.5)));
  p.beta = 0.0;
  EXPECT_EQ(adasyn(inst.x, inst.y, p).synthetic_count(), 0u);
}

TEST(Adasyn, SeedDeterminism) {
  Rng rng(52);
  const auto inst = imbalanced(rng);
  AdasynParams p;
  p.k = 3;
  p.seed = 1;
  const auto a = adasyn(inst.x, inst.y, p);
  const auto b = adasyn(inst.x, inst.y, p);
  EXPECT_TRUE(a.features.cwiseEqual(b.features).all());
  p.seed = 2;
  const auto c = adasyn(inst.x, inst.y, p);
  EXPECT_FALSE(a.features.cwiseEqual(c.features).all());
}

TEST(Adasyn, UniformFallbackWithoutMajorityNeighbours) {
  Matrix x(10, 1);
  x << 0, 1, 2, 100, 101, 102, 103, 104, 105, 106;
  const std::vector<int> y{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  AdasynParams p;
  p.k = 1;
  const auto out = adasyn(x, y, p);
  EXPECT_EQ(out.synthetic_count(), 4u);
  std::size_t total = 0;
  for (std::size_t row = 0; row < 3; ++row) {
    const auto it = out.per_seed_counts.find(row);
    const std::size_t g = it == out.per_seed_counts.end() ? 0 : it->second;
    EXPECT_GE(g, 1u);
    EXPECT_LE(g, 2u);
    total += g;
  }
  EXPECT_EQ(total, 4u);
}

TEST(Adasyn, Errors) {
  Matrix x(4, 1);
  x << 0, 1, 2, 3;
  EXPECT_THROW(adasyn(x, {0, 0, 0, 1}, {}), DataError);
  AdasynParams p;
  p.k = 4;
  EXPECT_THROW(adasyn(x, {0, 0, 1, 1}, p), DataError);
  p.k = 1;
  EXPECT_THROW(adasyn(x, {0, 1, 2, 1}, p), DataError);
}

TEST(AdasynOneVsRest, BalancesEveryClass) {
  Rng rng(53);
  Matrix x(60, 2);
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    const int c = i < 36 ? 0 : (i < 50 ? 1 : 2);
    y.push_back(c);
    x(i, 0) = c + rng.normal();
    x(i, 1) = -c + rng.normal();
  }
  AdasynParams p;
  p.k = 3;
  p.seed = 4;
  const auto out = adasyn_one_vs_rest(x, y, p);
  EXPECT_EQ(count(out.labels, 0), 36u);
  EXPECT_EQ(count(out.labels, 1), 36u);
  EXPECT_EQ(count(out.labels, 2), 36u);
  EXPECT_TRUE(bitwise_equal_rows(out.features, x, 60));
  for (std::size_t s = 60; s < out.labels.size(); ++s) {
    EXPECT_EQ(out.labels[s], y[out.source_rows[s]]);
  }
}

}  // namespace
}  // namespace cohort
