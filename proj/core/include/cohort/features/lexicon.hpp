#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cohort {

/// Literal word, or a prefix when written with a trailing '*'.
struct LexiconPattern {
  std::string stem;
  bool prefix = false;

  bool matches(std::string_view word) const noexcept {
    return prefix ? word.starts_with(stem) : word == stem;
  }
};

/// Word-category dictionaries and a word polarity table in [-1, 1].
///
/// Text format:
///
///     # comment
///     [ingest]
///     eat
///     cookie*
///     [valence]
///     bad -1
///     good 0.8
///
/// `[valence]` is reserved for the polarity table; every other section is a
/// category.
class LexiconSet {
 public:
  static LexiconSet parse(std::string_view text);
  static LexiconSet load(const std::filesystem::path& path);

  void add_category(std::string name, std::vector<LexiconPattern> patterns);
  void set_valence(std::string word, double polarity);

  bool has_category(std::string_view name) const;
  std::vector<std::string> category_names() const;
  const std::vector<LexiconPattern>& patterns(std::string_view name) const;
  bool category_matches(std::string_view name, std::string_view word) const;

  const std::map<std::string, double, std::less<>>& valence() const noexcept { return valence_; }

 private:
  std::vector<std::pair<std::string, std::vector<LexiconPattern>>> categories_;
  std::map<std::string, double, std::less<>> valence_;
};

}  // namespace cohort
