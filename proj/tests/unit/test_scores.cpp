#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/corpus/chat.hpp"
#include "cohort/metrics/labels.hpp"
#include "cohort/metrics/scores.hpp"
#include "oracles.hpp"

namespace cohort {
namespace {

TEST(ConfusionAndF1, HandExample) {
  const std::vector<int> t{0, 0, 1, 1}, p{0, 1, 1, 1};
  const auto s = confusion_and_f1(t, p, 2);
  EXPECT_EQ(s.confusion, (std::vector<std::vector<long>>{{1, 1}, {0, 2}}));
  EXPECT_DOUBLE_EQ(s.f1[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.f1[1], 0.8);
  EXPECT_DOUBLE_EQ(s.f1_macro, (2.0 / 3.0 + 0.8) / 2.0);
  EXPECT_DOUBLE_EQ(s.f1_micro, 0.75);
  EXPECT_DOUBLE_EQ(s.precision[1], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.recall[0], 0.5);
}

TEST(ConfusionAndF1, PerfectAndNeverPredicted) {
  const std::vector<int> t{0, 1, 2, 1}, perfect{0, 1, 2, 1}, no_two{0, 1, 1, 1};
  const auto a = confusion_and_f1(t, perfect, 3);
  EXPECT_EQ(a.f1_macro, 1.0);
  EXPECT_EQ(a.f1_micro, 1.0);
  const auto b = confusion_and_f1(t, no_two, 3);
  EXPECT_EQ(b.f1[2], 0.0);
  EXPECT_EQ(b.precision[2], 0.0);
}

TEST(ConfusionAndF1, Errors) {
  const std::vector<int> empty, one{0}, two{0, 1}, out_of_range{0, 3};
  EXPECT_THROW(confusion_and_f1(empty, empty, 2), DataError);
  EXPECT_THROW(confusion_and_f1(one, two, 2), DataError);
  EXPECT_THROW(confusion_and_f1(two, out_of_range, 2), DataError);
}

TEST(ConfusionAndF1, MicroIsAccuracy) {
  Rng rng(60);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 1 + rng.index(50);
    std::vector<int> t(n), p(n);
    long hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<int>(rng.index(3));
      p[i] = static_cast<int>(rng.index(3));
      hits += t[i] == p[i];
    }
    const auto s = confusion_and_f1(t, p, 3);
    EXPECT_DOUBLE_EQ(s.f1_micro, static_cast<double>(hits) / static_cast<double>(n));
    long total = 0;
    for (const auto& row : s.confusion) {
      for (long c : row) total += c;
    }
    EXPECT_EQ(total, static_cast<long>(n));
  }
}

TEST(RocAuc, HandExamples) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const bool pos[] = {false, false, true, true};
  EXPECT_EQ(roc_auc(s, pos), 0.75);
  const std::vector<double> flat{0.3, 0.3, 0.3, 0.3};
  EXPECT_EQ(roc_auc(flat, pos), 0.5);
  const std::vector<double> sep{0, 1, 2, 3};
  EXPECT_EQ(roc_auc(sep, pos), 1.0);
  const bool none[] = {false, false, false, false};
  EXPECT_THROW(roc_auc(s, none), DataError);
}

TEST(RocAuc, MatchesPairCountingExactly) {
  Rng rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 2 + rng.index(49);
    std::vector<double> scores(n);
    auto positive = std::make_unique<bool[]>(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.index(8)) / 4.0;
      positive[i] = rng.uniform() < 0.4;
    }
    positive[0] = true;
    positive[1] = false;
    const std::span<const bool> pos(positive.get(), n);
    EXPECT_EQ(roc_auc(scores, pos), testing::auc_by_pairs(scores, pos));
  }
}

TEST(RocAuc, InvariantUnderIncreasingTransform) {
  Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 4 + rng.index(40);
    std::vector<double> scores(n), transformed(n);
    auto positive = std::make_unique<bool[]>(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = rng.normal();
      transformed[i] = std::exp(3 * scores[i]) + scores[i];
      positive[i] = i % 2 == 0;
    }
    const std::span<const bool> pos(positive.get(), n);
    EXPECT_EQ(roc_auc(scores, pos), roc_auc(transformed, pos));
  }
}

TEST(OneVsAllAuc, PerfectIndicatorsAndAbsentClasses) {
  Matrix s(6, 3);
  s << 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  const std::vector<int> y{0, 1, 2, 0, 1, 2};
  for (double a : one_vs_all_auc(s, y)) EXPECT_EQ(a, 1.0);
  const std::vector<int> two{0, 1, 0, 0, 1, 1};
  const auto auc = one_vs_all_auc(s, two);
  EXPECT_TRUE(std::isnan(auc[2]));
}

TEST(OneVsAllAuc, RandomScoresNearHalf) {
  Rng rng(63);
  Matrix s(300, 3);
  std::vector<int> y(300);
  for (Eigen::Index i = 0; i < 300; ++i) {
    y[static_cast<std::size_t>(i)] = static_cast<int>(i % 3);
    for (int c = 0; c < 3; ++c) s(i, c) = rng.uniform();
  }
  for (double a : one_vs_all_auc(s, y)) {
    EXPECT_GE(a, 0.4);
    EXPECT_LE(a, 0.6);
  }
}

TEST(Labels, TrinaryThreshold) {
  Sample s = parse_plain_transcript("x");
  s.mmse = 29;
  EXPECT_EQ(label_trinary(s), ClassLabel::Control);
  s.diagnosis = Diagnosis::AD;
  s.mmse = 20;
  EXPECT_EQ(label_trinary(s), ClassLabel::Mild);
  s.mmse = 10;
  EXPECT_EQ(label_trinary(s), ClassLabel::Moderate);
  s.mmse = 11;
  EXPECT_EQ(label_trinary(s), ClassLabel::Mild);
  EXPECT_EQ(label_trinary(s, 12), ClassLabel::Moderate);
  EXPECT_EQ(label_binary(s), 1);
  s.mmse.reset();
  EXPECT_THROW(label_trinary(s), DataError);
}

}  // namespace
}  // namespace cohort
