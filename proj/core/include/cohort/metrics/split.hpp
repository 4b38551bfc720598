#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cohort {

struct SplitAssignment {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double ratio = 0.8;
};

/// Participant-grouped train/test split. Groups are shuffled by `seed` and
/// assigned to the training side until it holds at least ratio * N rows; the
/// remaining groups form the test side, which always receives at least one
/// group. Index lists are ascending.
/// Throws DataError unless 0 < ratio < 1 and at least two groups exist.
SplitAssignment grouped_split(std::span<const std::string> groups, double ratio, std::uint64_t seed);

/// Group-aware k-fold assignment: groups, largest first (ties by first
/// appearance), go to the fold with the fewest rows so far. Returns the fold of
/// every row. Throws DataError when there are fewer groups than folds.
std::vector<int> group_kfold(std::span<const std::string> groups, int folds);

}  // namespace cohort
