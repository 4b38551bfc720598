#include "cohort/metrics/labels.hpp"

#include <string>

#include "cohort/common/error.hpp"

namespace cohort {

std::string_view to_string(ClassLabel label) noexcept {
  switch (label) {
    case ClassLabel::Control: return "Control";
    case ClassLabel::Mild: return "Mild";
    case ClassLabel::Moderate: return "Moderate";
  }
  return "?";
}

ClassLabel label_trinary(const Sample& sample, int threshold) {
  if (sample.diagnosis == Diagnosis::Control) return ClassLabel::Control;
  if (!sample.mmse) {
    throw DataError("AD sample '" + sample.sample_id + "' has no MMSE score for trinary labelling");
  }
  return *sample.mmse > threshold ? ClassLabel::Mild : ClassLabel::Moderate;
}

}  // namespace cohort
