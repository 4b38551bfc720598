#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cohort/common/matrix.hpp"

namespace cohort {

/// Named feature columns plus per-row label, participant group and sample id.
/// `labels[i]` indexes `class_names`. Missing cells hold NaN.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  Matrix values;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::vector<std::string> groups;
  std::vector<std::string> sample_ids;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values.cols()); }

  /// Column index by name; nullopt when absent.
  std::optional<std::size_t> column_index(std::string_view name) const;

  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
  /// Throws ConfigError for an unknown name.
  FeatureMatrix select_columns(std::span<const std::string> names) const;

  /// Throws ValidationError when the metadata vectors disagree with the shape.
  void check_shape() const;
};

/// Header: participant_id,sample_id,label,<features...>[,synthetic_flag].
/// Values use '.' decimals with round-trip precision; missing is an empty cell.
std::string to_csv(const FeatureMatrix& matrix, const std::vector<bool>* synthetic_flags = nullptr);

/// Reads the format above. A trailing `synthetic_flag` column, if present, is
/// returned through `synthetic_flags` (or dropped when that pointer is null).
FeatureMatrix from_csv(std::string_view text, std::vector<bool>* synthetic_flags = nullptr);

/// Canonical class ordering for label names: {Control, AD},
/// {Control, Mild, Moderate}, otherwise lexicographic.
std::vector<std::string> canonical_class_order(std::vector<std::string> names);

}  // namespace cohort
