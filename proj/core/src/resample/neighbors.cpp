#include "cohort/resample/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cohort/common/error.hpp"

namespace cohort {

std::vector<std::size_t> k_nearest(const Matrix& points, std::size_t query, std::size_t k,
                                   std::span<const std::size_t> candidates) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (query >= n) throw DataError("k_nearest query index out of range");
  if (points.row(static_cast<Eigen::Index>(query)).hasNaN()) throw DataError("k_nearest query has NaN coordinates");

  std::vector<std::pair<double, std::size_t>> scored;
  auto consider = [&](std::size_t i) {
    if (i == query) return;
    const auto row = points.row(static_cast<Eigen::Index>(i));
    if (row.hasNaN()) throw DataError("k_nearest point " + std::to_string(i) + " has NaN coordinates");
    scored.emplace_back((row - points.row(static_cast<Eigen::Index>(query))).squaredNorm(), i);
  };
  if (candidates.empty()) {
    for (std::size_t i = 0; i < n; ++i) consider(i);
  } else {
    for (const auto i : candidates) consider(i);
  }
  if (k == 0 || k > scored.size()) {
    throw DataError("k_nearest needs 0 < k <= " + std::to_string(scored.size()) + " (got " + std::to_string(k) + ")");
  }
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace cohort
