#include "cohort/corpus/chat.hpp"

#include <cctype>
#include <string>

#include "cohort/common/error.hpp"
#include "common/text_util.hpp"

namespace cohort {
namespace {

bool is_terminator(std::string_view piece) {
  if (piece == "." || piece == "?" || piece == "!") return true;
  if (piece.size() >= 2 && piece.front() == '+') {
    const char last = piece.back();
    return last == '.' || last == '?' || last == '!';
  }
  return false;
}

bool is_unintelligible(std::string_view piece) {
  return piece == "xxx" || piece == "yyy" || piece == "www" || piece == "xx" || piece == "yy";
}

// Removes CHAT word-level markup: "(be)cause" -> "because", "wa:ter" -> "water",
// "word@o" -> "word", scope brackets and surrounding quotes.
std::string clean_word(std::string_view raw) {
  if (const auto at = raw.find('@'); at != std::string_view::npos && at > 0) raw = raw.substr(0, at);
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '(': case ')': case '<': case '>': case ':': case '"': case ',': case ';':
      case '\x15':
        break;
      default:
        out += c;
    }
  }
  while (!out.empty() && (out.front() == '\'' || out.front() == '-')) out.erase(out.begin());
  while (!out.empty() && (out.back() == '-' || out.back() == '\'')) {
    // keep trailing apostrophe of plural possessives ("boys'")
    if (out.back() == '\'' && out.size() > 1 && out[out.size() - 2] == 's') break;
    out.pop_back();
  }
  return detail::to_lower(out);
}

std::string strip_bullets(std::string_view content) {
  std::string out;
  bool inside = false;
  for (char c : content) {
    if (c == '\x15') {
      inside = !inside;
      continue;
    }
    if (!inside) out += c;
  }
  return out;
}

}  // namespace

std::vector<Utterance> tokenize_tier(std::string_view raw_content) {
  const std::string content = strip_bullets(raw_content);
  std::vector<Utterance> utterances;
  Utterance current;
  auto close = [&] {
    if (!current.tokens.empty()) utterances.push_back(std::move(current));
    current = Utterance{};
  };

  std::size_t i = 0;
  while (i < content.size()) {
    if (std::isspace(static_cast<unsigned char>(content[i]))) {
      ++i;
      continue;
    }
    if (content[i] == '[') {
      std::size_t end = content.find(']', i);
      if (end == std::string::npos) end = content.size() - 1;
      current.tokens.push_back({content.substr(i, end - i + 1), false});
      i = end + 1;
      continue;
    }
    std::size_t end = i;
    while (end < content.size() && !std::isspace(static_cast<unsigned char>(content[end])) &&
           content[end] != '[') {
      ++end;
    }
    std::string_view piece(content.data() + i, end - i);
    i = end;

    if (is_terminator(piece)) {
      close();
      continue;
    }
    if (piece.front() == '+' || piece == "," || piece == "‡" || piece == "„") {
      if (piece.front() == '+' && piece.size() > 1) current.tokens.push_back({std::string(piece), false});
      continue;
    }
    const bool omitted = piece.size() > 1 && piece.front() == '0' &&
                         std::isalpha(static_cast<unsigned char>(piece[1]));
    if (piece.front() == '&' || omitted) {
      current.tokens.push_back({detail::to_lower(piece), false});
      continue;
    }

    // Plain-text input may glue terminal punctuation onto the word.
    bool closes = false;
    while (!piece.empty() && (piece.back() == '.' || piece.back() == '?' || piece.back() == '!')) {
      piece.remove_suffix(1);
      closes = true;
    }
    std::string word = clean_word(piece);
    if (!word.empty()) {
      const bool annotation = is_unintelligible(word);
      current.tokens.push_back({std::move(word), !annotation});
    }
    if (closes) close();
  }
  close();
  return utterances;
}

Sample parse_chat(std::string_view text) {
  Sample sample;
  std::string tier_content;
  bool in_participant_tier = false;
  bool in_any_tier = false;

  auto flush = [&] {
    if (in_participant_tier) {
      for (auto& u : tokenize_tier(tier_content)) sample.utterances.push_back(std::move(u));
    }
    tier_content.clear();
    in_participant_tier = false;
  };

  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (n == 0 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    const std::size_t line_no = n + 1;
    if (detail::trim(line).empty()) continue;

    const char lead = line.front();
    if (lead == '@' || lead == '%') {
      flush();
      in_any_tier = lead == '%';
      continue;
    }
    if (lead == '*') {
      flush();
      const auto colon = line.find(':');
      if (colon == std::string_view::npos || colon < 2) {
        throw ParseError("malformed speaker tier on line " + std::to_string(line_no), line_no);
      }
      for (std::size_t c = 1; c < colon; ++c) {
        const auto ch = static_cast<unsigned char>(line[c]);
        if (!std::isalnum(ch) && ch != '_' && ch != '-') {
          throw ParseError("malformed speaker code on line " + std::to_string(line_no), line_no, c);
        }
      }
      in_any_tier = true;
      in_participant_tier = line.substr(1, colon - 1) == "PAR";
      tier_content = std::string(line.substr(colon + 1));
      continue;
    }
    if (lead == '\t' || lead == ' ') {
      if (!in_any_tier) {
        throw ParseError("continuation line outside a tier on line " + std::to_string(line_no), line_no);
      }
      if (in_participant_tier) {
        tier_content += ' ';
        tier_content += line;
      }
      continue;
    }
    throw ParseError("malformed line prefix on line " + std::to_string(line_no), line_no);
  }
  flush();

  if (sample.utterances.empty()) throw DataError("transcript has no participant (*PAR:) content");
  return sample;
}

Sample parse_plain_transcript(std::string_view text) {
  Sample sample;
  for (std::string_view line : detail::split_lines(text)) {
    if (detail::trim(line).empty()) continue;
    Utterance merged;
    for (auto& u : tokenize_tier(line)) {
      for (auto& t : u.tokens) merged.tokens.push_back(std::move(t));
    }
    if (!merged.tokens.empty()) sample.utterances.push_back(std::move(merged));
  }
  if (sample.utterances.empty()) throw DataError("transcript has no content");
  return sample;
}

}  // namespace cohort
