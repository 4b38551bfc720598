#include "cohort/corpus/types.hpp"

#include <map>
#include <set>

#include "cohort/common/error.hpp"

namespace cohort {

std::vector<std::string> Utterance::words() const {
  std::vector<std::string> out;
  for (const auto& token : tokens) {
    if (token.is_word) out.push_back(token.surface);
  }
  return out;
}

std::size_t Utterance::word_count() const {
  std::size_t n = 0;
  for (const auto& token : tokens) n += token.is_word ? 1 : 0;
  return n;
}

void Utterance::attach_tree(ParseTree parsed) {
  const auto expected = words();
  const auto actual = aligned_yield(parsed);
  if (expected != actual) {
    std::string message = "tree yield does not match utterance words: tree '";
    for (const auto& w : actual) message += w + ' ';
    message += "' vs words '";
    for (const auto& w : expected) message += w + ' ';
    message += "'";
    throw ValidationError(message);
  }
  tree = std::move(parsed);
}

std::string_view to_string(Diagnosis d) noexcept {
  return d == Diagnosis::AD ? "AD" : "Control";
}

std::string_view to_string(SourceTag s) noexcept {
  switch (s) {
    case SourceTag::DB: return "DB";
    case SourceTag::WLS: return "WLS";
    case SourceTag::T2M: return "T2M";
    case SourceTag::SYNTH: return "SYNTH";
  }
  return "?";
}

Diagnosis parse_diagnosis(std::string_view text) {
  if (text == "AD" || text == "Dementia" || text == "ad") return Diagnosis::AD;
  if (text == "Control" || text == "CT" || text == "control") return Diagnosis::Control;
  throw ConfigError("unknown diagnosis '" + std::string(text) + "' (expected AD or Control)");
}

SourceTag parse_source_tag(std::string_view text) {
  if (text == "DB") return SourceTag::DB;
  if (text == "WLS") return SourceTag::WLS;
  if (text == "T2M") return SourceTag::T2M;
  if (text == "SYNTH") return SourceTag::SYNTH;
  throw ConfigError("unknown source tag '" + std::string(text) + "'");
}

bool Sample::has_trees() const {
  for (const auto& u : utterances) {
    if (u.word_count() > 0 && !u.tree) return false;
  }
  return true;
}

std::size_t Sample::word_count() const {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.word_count();
  return n;
}

CohortDataset::CohortDataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  validate();
}

void CohortDataset::validate() const {
  std::set<std::string> sample_ids;
  std::map<std::string, Diagnosis> diagnosis_of;
  for (const auto& s : samples_) {
    if (s.participant_id.empty()) throw ValidationError("sample '" + s.sample_id + "' has no participant_id");
    if (!sample_ids.insert(s.sample_id).second) {
      throw ValidationError("duplicate sample_id '" + s.sample_id + "'");
    }
    auto [it, inserted] = diagnosis_of.emplace(s.participant_id, s.diagnosis);
    if (!inserted && it->second != s.diagnosis) {
      throw ValidationError("participant '" + s.participant_id + "' carries two diagnoses");
    }
    if (s.mmse && (*s.mmse < 0 || *s.mmse > 30)) {
      throw ValidationError("sample '" + s.sample_id + "' has MMSE outside [0, 30]");
    }
    for (const auto& u : s.utterances) {
      if (u.tokens.empty()) throw ValidationError("sample '" + s.sample_id + "' has an empty utterance");
    }
  }
}

std::vector<SourceTag> CohortDataset::source_tags() const {
  std::vector<SourceTag> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.source);
  return out;
}

std::vector<std::string> CohortDataset::participant_ids() const {
  std::vector<std::string> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.participant_id);
  return out;
}

CohortDataset CohortDataset::merge(const std::vector<const CohortDataset*>& parts) {
  std::vector<Sample> all;
  for (const auto* part : parts) {
    all.insert(all.end(), part->samples_.begin(), part->samples_.end());
  }
  return CohortDataset(std::move(all));
}

}  // namespace cohort
