#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cohort/common/matrix.hpp"

namespace cohort {

/// Brute-force Euclidean k nearest neighbours of row `query` among `candidates`
/// (all rows when `candidates` is empty), excluding the query row itself.
/// Sorted by ascending distance, ties by ascending row index. Callers
/// standardize columns beforehand. Throws DataError for k >= number of
/// candidates other than the query and for NaN coordinates.
std::vector<std::size_t> k_nearest(const Matrix& points, std::size_t query, std::size_t k,
                                   std::span<const std::size_t> candidates = {});

}  // namespace cohort
