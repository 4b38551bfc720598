#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cohort/corpus/tree.hpp"

namespace cohort {

struct Token {
  std::string surface;
  /// False for annotation codes (fillers, event codes, unintelligible markers).
  bool is_word = true;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Utterance {
  std::vector<Token> tokens;
  std::optional<ParseTree> tree;

  std::vector<std::string> words() const;
  std::size_t word_count() const;

  /// Attaches a tree after checking that its aligned yield equals the word
  /// tokens. Throws ValidationError on mismatch.
  void attach_tree(ParseTree parsed);

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

enum class Diagnosis { Control, AD };

enum class SourceTag { DB, WLS, T2M, SYNTH };

std::string_view to_string(Diagnosis d) noexcept;
std::string_view to_string(SourceTag s) noexcept;
Diagnosis parse_diagnosis(std::string_view text);
SourceTag parse_source_tag(std::string_view text);

struct Sample {
  std::string participant_id;
  std::string sample_id;
  std::vector<Utterance> utterances;
  Diagnosis diagnosis = Diagnosis::Control;
  std::optional<int> mmse;
  SourceTag source = SourceTag::DB;

  /// True when every utterance carrying words also carries a tree.
  bool has_trees() const;
  std::size_t word_count() const;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Immutable after construction; validate() enforces the cross-sample invariants.
class CohortDataset {
 public:
  CohortDataset() = default;
  explicit CohortDataset(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  std::vector<SourceTag> source_tags() const;
  /// One entry per sample, in sample order.
  std::vector<std::string> participant_ids() const;

  /// Concatenation; re-validated.
  static CohortDataset merge(const std::vector<const CohortDataset*>& parts);

  friend bool operator==(const CohortDataset&, const CohortDataset&) = default;

 private:
  void validate() const;

  std::vector<Sample> samples_;
};

}  // namespace cohort
