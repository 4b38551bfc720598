#pragma once

#include <cstddef>
#include <functional>

namespace cohort {

/// Worker cap: COHORT_AUGMENT_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Results must be
/// written to per-index slots; the first exception thrown is rethrown here after
/// all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cohort
