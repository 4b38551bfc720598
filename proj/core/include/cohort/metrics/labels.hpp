#pragma once

#include <string_view>

#include "cohort/corpus/types.hpp"

namespace cohort {

enum class ClassLabel { Control, Mild, Moderate };

std::string_view to_string(ClassLabel label) noexcept;

/// Control stays Control; AD splits on MMSE: above `threshold` is Mild, at or
/// below it is Moderate. Throws DataError for an AD sample without MMSE.
ClassLabel label_trinary(const Sample& sample, int threshold = 10);

/// 0 = Control, 1 = AD.
inline int label_binary(const Sample& sample) noexcept {
  return sample.diagnosis == Diagnosis::AD ? 1 : 0;
}

}  // namespace cohort
