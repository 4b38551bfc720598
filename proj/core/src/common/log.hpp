#pragma once

#include <spdlog/spdlog.h>

namespace cohort::detail {

/// Shared stderr logger. Level comes from COHORT_AUGMENT_LOG (spdlog level
/// names), default "warn".
spdlog::logger& logger();

}  // namespace cohort::detail
