#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "cohort/common/matrix.hpp"

namespace cohort {

struct AdasynParams {
  /// Fraction of the class gap to fill; 1 balances the classes.
  double beta = 1.0;
  std::size_t k = 5;
  std::uint64_t seed = 0;
};

/// Original rows come first and unchanged; synthetic rows follow.
struct ResampleOutcome {
  Matrix features;
  std::vector<int> labels;
  std::vector<bool> synthetic_flags;
  /// Minority row (index into the input) -> number of synthetic rows generated from it.
  std::map<std::size_t, std::size_t> per_seed_counts;
  /// For each output row, the input row it came from (itself for originals,
  /// the seed minority row for synthetic rows).
  std::vector<std::size_t> source_rows;

  std::size_t synthetic_count() const;
};

/// Adaptive synthetic oversampling for two classes.
///
/// G = round((m_large - m_small) * beta) synthetic points are shared among the
/// minority rows in proportion to the fraction of majority rows among each
/// one's k nearest neighbours (largest-remainder rounding, so the shares sum to
/// exactly G; uniform shares when no minority row has a majority neighbour).
/// Each synthetic point interpolates x_i + lambda (x_z - x_i), lambda ~ U[0, 1],
/// toward a random one of x_i's k nearest minority neighbours. Neighbour
/// searches run on z-scored columns; interpolation happens in the input space.
///
/// Throws DataError for more than two classes, a minority class of one row,
/// or k not smaller than the number of rows.
ResampleOutcome adasyn(const Matrix& features, const std::vector<int>& labels, const AdasynParams& params);

/// Multi-class variant: each class smaller than the largest is oversampled in
/// turn (ascending size) against the pooled remainder, targeting
/// (m_largest - m_class) * beta new rows.
ResampleOutcome adasyn_one_vs_rest(const Matrix& features, const std::vector<int>& labels,
                                   const AdasynParams& params);

}  // namespace cohort
