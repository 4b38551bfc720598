#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cohort {

/// Constituency tree node. A node is either internal (one or more child nodes)
/// or a preterminal (exactly one terminal word, no child nodes).
class ParseTree {
 public:
  ParseTree() = default;

  static ParseTree internal(std::string label, std::vector<ParseTree> children);
  static ParseTree preterminal(std::string tag, std::string word);

  const std::string& label() const noexcept { return label_; }
  const std::vector<ParseTree>& children() const noexcept { return children_; }
  const std::string& word() const noexcept { return word_; }

  bool is_preterminal() const noexcept { return children_.empty(); }

  /// Terminal words left to right.
  std::vector<std::string> yield() const;

  /// Preterminal (POS) tags left to right.
  std::vector<std::string> tags() const;

  /// Single-line bracketed form, e.g. "(ROOT (S (NP (PRP he)) (VP (VBZ runs))))".
  std::string to_bracketed() const;

  friend bool operator==(const ParseTree&, const ParseTree&) = default;

 private:
  std::string label_;
  std::vector<ParseTree> children_;
  std::string word_;
};

/// Parses every top-level bracketed expression. Top-level nodes must be labelled
/// ROOT (an empty outer label, as in "( (S ...))", is read as ROOT). Terminal
/// words are lowercased; labels are kept verbatim.
///
/// Throws ParseError on unbalanced parentheses (reporting the line and byte
/// offset) and on structural violations such as a bare word beside child nodes.
std::vector<ParseTree> parse_treebank(std::string_view text);

/// True for preterminal tags that mark punctuation rather than words.
bool is_punctuation_tag(std::string_view tag) noexcept;

/// Tree terminals as they should align with transcript word tokens: punctuation
/// preterminals are dropped and clitic pieces ("'s", "n't") rejoin the preceding
/// word.
std::vector<std::string> aligned_yield(const ParseTree& tree);

}  // namespace cohort
