#include "cohort/features/lexicon.hpp"

#include <algorithm>
#include <cmath>

#include "cohort/common/error.hpp"
#include "common/csv.hpp"
#include "common/io.hpp"
#include "common/text_util.hpp"

namespace cohort {

LexiconSet LexiconSet::parse(std::string_view text) {
  LexiconSet set;
  std::string section;
  std::vector<LexiconPattern> patterns;
  bool in_section = false;

  auto close_section = [&] {
    if (in_section && section != "valence") set.add_category(section, std::move(patterns));
    patterns.clear();
  };

  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = detail::trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError("malformed lexicon section header on line " + std::to_string(line_no), line_no);
      }
      close_section();
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "valence" && set.has_category(section)) {
        throw ParseError("duplicate lexicon category '" + section + "' on line " + std::to_string(line_no), line_no);
      }
      in_section = true;
      continue;
    }
    if (!in_section) {
      throw ParseError("lexicon entry outside a section on line " + std::to_string(line_no), line_no);
    }
    if (section == "valence") {
      const auto space = line.find_first_of(" \t");
      if (space == std::string_view::npos) {
        throw ParseError("valence entry needs '<word> <score>' on line " + std::to_string(line_no), line_no);
      }
      const auto score = detail::parse_double(detail::trim(line.substr(space)));
      if (!score || *score < -1.0 || *score > 1.0) {
        throw ParseError("valence score must be a number in [-1, 1] on line " + std::to_string(line_no), line_no);
      }
      set.set_valence(detail::to_lower(line.substr(0, space)), *score);
      continue;
    }
    LexiconPattern p;
    if (line.back() == '*') {
      p.prefix = true;
      line.remove_suffix(1);
    }
    if (line.empty() || line.find('*') != std::string_view::npos) {
      throw ParseError("lexicon pattern must be a word with an optional trailing '*' (line " +
                           std::to_string(line_no) + ")",
                       line_no);
    }
    p.stem = detail::to_lower(line);
    patterns.push_back(std::move(p));
  }
  close_section();
  return set;
}

LexiconSet LexiconSet::load(const std::filesystem::path& path) {
  return parse(detail::read_file(path, "lexicon"));
}

void LexiconSet::add_category(std::string name, std::vector<LexiconPattern> patterns) {
  if (has_category(name)) throw ConfigError("duplicate lexicon category '" + name + "'");
  categories_.emplace_back(std::move(name), std::move(patterns));
}

void LexiconSet::set_valence(std::string word, double polarity) {
  if (!(polarity >= -1.0 && polarity <= 1.0)) throw ConfigError("valence polarity must lie in [-1, 1]");
  valence_[std::move(word)] = polarity;
}

bool LexiconSet::has_category(std::string_view name) const {
  return std::any_of(categories_.begin(), categories_.end(), [&](const auto& c) { return c.first == name; });
}

std::vector<std::string> LexiconSet::category_names() const {
  std::vector<std::string> names;
  for (const auto& c : categories_) names.push_back(c.first);
  return names;
}

const std::vector<LexiconPattern>& LexiconSet::patterns(std::string_view name) const {
  for (const auto& c : categories_) {
    if (c.first == name) return c.second;
  }
  throw ConfigError("unknown lexicon category '" + std::string(name) + "'");
}

bool LexiconSet::category_matches(std::string_view name, std::string_view word) const {
  const auto& list = patterns(name);
  return std::any_of(list.begin(), list.end(), [&](const LexiconPattern& p) { return p.matches(word); });
}

}  // namespace cohort
