#include <gtest/gtest.h>

#include <cmath>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/features/feature_matrix.hpp"

namespace cohort {
namespace {

FeatureMatrix small_matrix() {
  FeatureMatrix m;
  m.feature_names = {"a", "b", "c"};
  m.values = Matrix(3, 3);
  m.values << 0.1, -2.5e-300, std::nan(""), 1.0 / 3.0, 7, 1e17, -0.0, 4.25, 3;
  m.labels = {0, 1, 0};
  m.class_names = {"Control", "AD"};
  m.groups = {"P1", "P2", "P1"};
  m.sample_ids = {"P1-1", "P2-1", "P1-2"};
  return m;
}

bool same_bits(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::isnan(a(i, j)) != std::isnan(b(i, j))) return false;
      if (!std::isnan(a(i, j)) && a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

TEST(FeatureMatrixCsv, RoundTripIsExact) {
  const auto m = small_matrix();
  const auto back = from_csv(to_csv(m));
  EXPECT_EQ(back.feature_names, m.feature_names);
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(back.class_names, m.class_names);
  EXPECT_EQ(back.groups, m.groups);
  EXPECT_EQ(back.sample_ids, m.sample_ids);
  EXPECT_TRUE(same_bits(back.values, m.values));
}

TEST(FeatureMatrixCsv, RandomValuesRoundTrip) {
  Rng rng(4);
  FeatureMatrix m = small_matrix();
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) m.values(i, j) = rng.normal() * std::pow(10.0, rng.uniform() * 40 - 20);
  }
  EXPECT_TRUE(same_bits(from_csv(to_csv(m)).values, m.values));
}

TEST(FeatureMatrixCsv, SyntheticFlagColumn) {
  const auto m = small_matrix();
  const std::vector<bool> flags{false, false, true};
  const auto text = to_csv(m, &flags);
  EXPECT_NE(text.find("synthetic_flag"), std::string::npos);
  std::vector<bool> read;
  const auto back = from_csv(text, &read);
  EXPECT_EQ(read, flags);
  EXPECT_EQ(back.cols(), 3u);
  EXPECT_EQ(from_csv(text).cols(), 3u);
}

TEST(FeatureMatrixCsv, MalformedInput) {
  EXPECT_THROW(from_csv("x,y,z\n"), ParseError);
  EXPECT_THROW(from_csv("participant_id,sample_id,label,a\nP,S,Control,1,2\n"), ParseError);
  EXPECT_THROW(from_csv("participant_id,sample_id,label,a\nP,S,Control,abc\n"), ParseError);
}

TEST(FeatureMatrix, SelectRowsAndColumns) {
  const auto m = small_matrix();
  const std::vector<std::size_t> rows{2, 0};
  const auto r = m.select_rows(rows);
  EXPECT_EQ(r.sample_ids, (std::vector<std::string>{"P1-2", "P1-1"}));
  EXPECT_EQ(r.values(0, 1), 4.25);
  const std::vector<std::string> cols{"c", "a"};
  const auto c = m.select_columns(cols);
  EXPECT_EQ(c.feature_names, cols);
  EXPECT_EQ(c.values(1, 0), 1e17);
  const std::vector<std::string> bad{"zzz"};
  EXPECT_THROW(m.select_columns(bad), ConfigError);
  EXPECT_EQ(m.column_index("b"), 1u);
  EXPECT_EQ(m.column_index("nope"), std::nullopt);
}

TEST(FeatureMatrix, ShapeCheck) {
  auto m = small_matrix();
  EXPECT_NO_THROW(m.check_shape());
  m.groups.pop_back();
  EXPECT_THROW(m.check_shape(), ValidationError);
}

TEST(CanonicalOrder, KnownSchemes) {
  EXPECT_EQ(canonical_class_order({"AD", "Control"}), (std::vector<std::string>{"Control", "AD"}));
  EXPECT_EQ(canonical_class_order({"Moderate", "Control", "Mild"}),
            (std::vector<std::string>{"Control", "Mild", "Moderate"}));
  EXPECT_EQ(canonical_class_order({"z", "b"}), (std::vector<std::string>{"b", "z"}));
}

}  // namespace
}  // namespace cohort
