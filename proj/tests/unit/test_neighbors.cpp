#include <gtest/gtest.h>

#include <cmath>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/resample/neighbors.hpp"
#include "oracles.hpp"

namespace cohort {
namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

TEST(KNearest, HandExamples) {
  const auto pts = column({0, 1, 2, 10});
  EXPECT_EQ(k_nearest(pts, 0, 2), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(k_nearest(pts, 3, 3), (std::vector<std::size_t>{2, 1, 0}));
  const auto dup = column({5, 1, 5, 7});
  EXPECT_EQ(k_nearest(dup, 0, 1), std::vector<std::size_t>{2});
}

TEST(KNearest, TiesByIndex) {
  const auto pts = column({0, -1, 1, 2});
  EXPECT_EQ(k_nearest(pts, 0, 2), (std::vector<std::size_t>{1, 2}));
}

TEST(KNearest, CandidateSubset) {
  const auto pts = column({0, 1, 2, 3, 4});
  const std::vector<std::size_t> cand{0, 3, 4};
  EXPECT_EQ(k_nearest(pts, 0, 2, cand), (std::vector<std::size_t>{3, 4}));
}

TEST(KNearest, Errors) {
  const auto pts = column({0, 1, 2});
  EXPECT_THROW(k_nearest(pts, 0, 3), DataError);
  auto bad = pts;
  bad(1, 0) = std::nan("");
  EXPECT_THROW(k_nearest(bad, 0, 1), DataError);
}

TEST(KNearest, MatchesSortingOracle) {
  Rng rng(30);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 3 + rng.index(40);
    const auto d = 1 + rng.index(5);
    Matrix pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = std::round(4 * rng.normal()) / 2;
    const auto q = rng.index(n);
    const auto k = 1 + rng.index(n - 1);
    EXPECT_EQ(k_nearest(pts, q, k), testing::knn_by_sorting(pts, q, k));
  }
}

}  // namespace
}  // namespace cohort
