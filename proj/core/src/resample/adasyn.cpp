#include "cohort/resample/adasyn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "cohort/common/error.hpp"
#include "cohort/common/parallel.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/features/extract.hpp"
#include "cohort/resample/neighbors.hpp"
#include "common/log.hpp"

namespace cohort {

std::size_t ResampleOutcome::synthetic_count() const {
  return static_cast<std::size_t>(std::count(synthetic_flags.begin(), synthetic_flags.end(), true));
}

namespace {

// Largest-remainder apportionment of `total` over non-negative weights; ties in
// the remainder go to the lower index.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> shares(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] / sum * static_cast<double>(total);
    shares[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += shares[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++shares[remainders[r % remainders.size()].second];
  return shares;
}

ResampleOutcome identity_outcome(const Matrix& features, const std::vector<int>& labels) {
  ResampleOutcome out;
  out.features = features;
  out.labels = labels;
  out.synthetic_flags.assign(labels.size(), false);
  out.source_rows.resize(labels.size());
  std::iota(out.source_rows.begin(), out.source_rows.end(), std::size_t{0});
  return out;
}

// Core pass: oversample rows with is_minority[i] by `target` new rows.
ResampleOutcome oversample(const Matrix& features, const std::vector<int>& labels,
                           const std::vector<bool>& is_minority, int minority_label, std::size_t target,
                           const AdasynParams& params) {
  const auto n = static_cast<std::size_t>(features.rows());
  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_minority[i]) minority.push_back(i);
  }
  if (minority.size() < 2) throw DataError("ADASYN needs at least two minority rows");
  if (params.k == 0 || params.k >= n) {
    throw DataError("ADASYN k must satisfy 0 < k < training size (k=" + std::to_string(params.k) +
                    ", n=" + std::to_string(n) + ")");
  }
  if (features.hasNaN()) throw DataError("ADASYN input contains NaN; impute first");

  ResampleOutcome out = identity_outcome(features, labels);
  if (target == 0) return out;

  Matrix scaled = features;
  Standardizer::fit(features).apply(scaled);

  const std::size_t m = minority.size();
  std::vector<double> hardness(m, 0.0);
  std::vector<std::vector<std::size_t>> partners(m);
  const std::size_t k_minority = std::min(params.k, m - 1);
  parallel_for(m, [&](std::size_t j) {
    const auto i = minority[j];
    const auto neighbors = k_nearest(scaled, i, params.k);
    const auto majority = std::count_if(neighbors.begin(), neighbors.end(),
                                        [&](std::size_t nb) { return !is_minority[nb]; });
    hardness[j] = static_cast<double>(majority) / static_cast<double>(params.k);
    partners[j] = k_nearest(scaled, i, k_minority, minority);
  });

  std::vector<double> weights = hardness;
  if (std::accumulate(weights.begin(), weights.end(), 0.0) == 0.0) {
    detail::logger().warn("ADASYN: no minority row has majority neighbours; allocating uniformly");
    std::fill(weights.begin(), weights.end(), 1.0);
  }
  const auto shares = apportion(weights, target);

  std::vector<Matrix> generated(m);
  parallel_for(m, [&](std::size_t j) {
    if (shares[j] == 0) return;
    const auto i = minority[j];
    Rng rng(derive_seed(params.seed, i));
    Matrix block(static_cast<Eigen::Index>(shares[j]), features.cols());
    const auto origin = features.row(static_cast<Eigen::Index>(i));
    for (std::size_t s = 0; s < shares[j]; ++s) {
      const auto partner = partners[j][rng.index(partners[j].size())];
      const double lambda = rng.uniform();
      block.row(static_cast<Eigen::Index>(s)) =
          origin + lambda * (features.row(static_cast<Eigen::Index>(partner)) - origin);
    }
    generated[j] = std::move(block);
  });

  out.features.conservativeResize(static_cast<Eigen::Index>(n + target), features.cols());
  std::size_t row = n;
  for (std::size_t j = 0; j < m; ++j) {
    if (shares[j] == 0) continue;
    out.per_seed_counts[minority[j]] = shares[j];
    out.features.middleRows(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(shares[j])) = generated[j];
    for (std::size_t s = 0; s < shares[j]; ++s) {
      out.labels.push_back(minority_label);
      out.synthetic_flags.push_back(true);
      out.source_rows.push_back(minority[j]);
    }
    row += shares[j];
  }
  return out;
}

std::map<int, std::size_t> class_counts(const std::vector<int>& labels) {
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  return counts;
}

std::size_t gap_target(std::size_t large, std::size_t small, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("ADASYN beta must lie in [0, 1]");
  return static_cast<std::size_t>(std::llround(static_cast<double>(large - small) * beta));
}

}  // namespace

ResampleOutcome adasyn(const Matrix& features, const std::vector<int>& labels, const AdasynParams& params) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DataError("ADASYN features and labels differ in length");
  }
  const auto counts = class_counts(labels);
  if (counts.size() != 2) {
    throw DataError("ADASYN is binary; got " + std::to_string(counts.size()) +
                    " classes (use adasyn_one_vs_rest for more)");
  }
  auto small = counts.begin();
  auto large = std::next(counts.begin());
  if (small->second > large->second) std::swap(small, large);
  if (small->second < 2) throw DataError("ADASYN minority class has a single row");
  if (params.k == 0 || params.k >= labels.size()) {
    throw DataError("ADASYN k must satisfy 0 < k < training size");
  }
  const std::size_t target = gap_target(large->second, small->second, params.beta);
  std::vector<bool> is_minority(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) is_minority[i] = labels[i] == small->first;
  return oversample(features, labels, is_minority, small->first, target, params);
}

ResampleOutcome adasyn_one_vs_rest(const Matrix& features, const std::vector<int>& labels,
                                   const AdasynParams& params) {
  const auto counts = class_counts(labels);
  if (counts.size() <= 2) return adasyn(features, labels, params);

  std::vector<std::pair<std::size_t, int>> order;
  std::size_t largest = 0;
  for (const auto& [label, count] : counts) {
    order.emplace_back(count, label);
    largest = std::max(largest, count);
  }
  std::sort(order.begin(), order.end());

  ResampleOutcome current = identity_outcome(features, labels);
  for (std::size_t step = 0; step < order.size(); ++step) {
    const auto [count, label] = order[step];
    if (count == largest) continue;
    if (count < 2) throw DataError("ADASYN class " + std::to_string(label) + " has a single row");
    std::vector<bool> is_minority(current.labels.size());
    for (std::size_t i = 0; i < current.labels.size(); ++i) is_minority[i] = current.labels[i] == label;
    AdasynParams pass = params;
    pass.seed = derive_seed(params.seed, 0x100 + static_cast<std::uint64_t>(label));
    const auto next = oversample(current.features, current.labels, is_minority, label,
                                 gap_target(largest, count, params.beta), pass);
    // Rows appended by this pass map back through the previous pass.
    ResampleOutcome merged;
    merged.features = next.features;
    merged.labels = next.labels;
    merged.synthetic_flags = current.synthetic_flags;
    merged.source_rows = current.source_rows;
    merged.per_seed_counts = current.per_seed_counts;
    for (std::size_t r = current.labels.size(); r < next.labels.size(); ++r) {
      merged.synthetic_flags.push_back(true);
      merged.source_rows.push_back(current.source_rows[next.source_rows[r]]);
    }
    for (const auto& [row, g] : next.per_seed_counts) merged.per_seed_counts[row] += g;
    current = std::move(merged);
  }
  return current;
}

}  // namespace cohort
