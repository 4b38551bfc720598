#include "cohort/corpus/tree.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

#include "cohort/common/error.hpp"
#include "common/text_util.hpp"

namespace cohort {

ParseTree ParseTree::internal(std::string label, std::vector<ParseTree> children) {
  if (children.empty()) {
    throw ValidationError("internal node '" + label + "' needs at least one child");
  }
  ParseTree node;
  node.label_ = std::move(label);
  node.children_ = std::move(children);
  return node;
}

ParseTree ParseTree::preterminal(std::string tag, std::string word) {
  if (word.empty()) throw ValidationError("preterminal '" + tag + "' has an empty word");
  ParseTree node;
  node.label_ = std::move(tag);
  node.word_ = std::move(word);
  return node;
}

namespace {

void collect(const ParseTree& node, std::vector<std::string>& out, bool words) {
  if (node.is_preterminal()) {
    out.push_back(words ? node.word() : node.label());
    return;
  }
  for (const auto& child : node.children()) collect(child, out, words);
}

void render(const ParseTree& node, std::string& out) {
  out += '(';
  out += node.label();
  out += ' ';
  if (node.is_preterminal()) {
    out += node.word();
  } else {
    for (std::size_t i = 0; i < node.children().size(); ++i) {
      if (i > 0) out += ' ';
      render(node.children()[i], out);
    }
  }
  out += ')';
}

struct Lexeme {
  enum Kind { Open, Close, Atom, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class TreeLexer {
 public:
  explicit TreeLexer(std::string_view text) : text_(text) {}

  Lexeme next() {
    skip_space();
    if (pos_ >= text_.size()) return {Lexeme::End, {}, line_, column()};
    const std::size_t col = column();
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      return {Lexeme::Open, "(", line_, col};
    }
    if (c == ')') {
      ++pos_;
      return {Lexeme::Close, ")", line_, col};
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    return {Lexeme::Atom, std::string(text_.substr(start, pos_ - start)), line_, col};
  }

  Lexeme peek() {
    const auto saved_pos = pos_;
    const auto saved_line = line_;
    const auto saved_start = line_start_;
    Lexeme lex = next();
    pos_ = saved_pos;
    line_ = saved_line;
    line_start_ = saved_start;
    return lex;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') {
        ++line_;
        line_start_ = pos_ + 1;
      }
      ++pos_;
    }
  }
  std::size_t column() const { return pos_ - line_start_; }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

std::string where(const Lexeme& lex) {
  return " at line " + std::to_string(lex.line) + ", column " + std::to_string(lex.column);
}

[[noreturn]] void fail_at(const std::string& what, const Lexeme& lex) {
  throw ParseError(what + where(lex), lex.line, lex.column);
}

// Called after the opening parenthesis has been consumed.
ParseTree parse_node(TreeLexer& lexer, const Lexeme& open) {
  std::string label;
  if (lexer.peek().kind == Lexeme::Atom) label = lexer.next().text;

  Lexeme lex = lexer.next();
  if (lex.kind == Lexeme::End) fail_at("unbalanced parentheses: end of input inside node opened", open);
  if (lex.kind == Lexeme::Close) fail_at("empty node '" + label + "'", lex);
  if (lex.kind == Lexeme::Atom) {
    Lexeme close = lexer.next();
    if (close.kind == Lexeme::End) fail_at("unbalanced parentheses: end of input inside node opened", open);
    if (close.kind != Lexeme::Close) {
      fail_at("bare terminal '" + lex.text + "' is not enclosed in a preterminal", lex);
    }
    if (label.empty()) fail_at("terminal '" + lex.text + "' has no preterminal tag", lex);
    return ParseTree::preterminal(std::move(label), detail::to_lower(lex.text));
  }

  std::vector<ParseTree> children;
  while (true) {
    if (lex.kind == Lexeme::Open) {
      children.push_back(parse_node(lexer, lex));
    } else if (lex.kind == Lexeme::Close) {
      break;
    } else if (lex.kind == Lexeme::Atom) {
      fail_at("bare terminal '" + lex.text + "' is not enclosed in a preterminal", lex);
    } else {
      fail_at("unbalanced parentheses: end of input inside node opened", open);
    }
    lex = lexer.next();
  }
  return ParseTree::internal(std::move(label), std::move(children));
}

}  // namespace

std::vector<std::string> ParseTree::yield() const {
  std::vector<std::string> out;
  collect(*this, out, true);
  return out;
}

std::vector<std::string> ParseTree::tags() const {
  std::vector<std::string> out;
  collect(*this, out, false);
  return out;
}

std::string ParseTree::to_bracketed() const {
  std::string out;
  render(*this, out);
  return out;
}

std::vector<ParseTree> parse_treebank(std::string_view text) {
  TreeLexer lexer(text);
  std::vector<ParseTree> trees;
  for (Lexeme lex = lexer.next(); lex.kind != Lexeme::End; lex = lexer.next()) {
    if (lex.kind == Lexeme::Close) fail_at("unbalanced parentheses: unexpected ')'", lex);
    if (lex.kind == Lexeme::Atom) fail_at("text '" + lex.text + "' outside any tree", lex);
    ParseTree tree = parse_node(lexer, lex);
    if (tree.label().empty()) {
      if (tree.is_preterminal()) fail_at("top-level node must not be a preterminal", lex);
      tree = ParseTree::internal("ROOT", tree.children());
    }
    if (tree.label() != "ROOT") fail_at("top-level node is labelled '" + tree.label() + "', expected ROOT", lex);
    if (tree.is_preterminal()) fail_at("ROOT must have child nodes", lex);
    trees.push_back(std::move(tree));
  }
  return trees;
}

bool is_punctuation_tag(std::string_view tag) noexcept {
  static constexpr std::array<std::string_view, 11> kTags = {
      ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$", "HYPH", "NFP"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

std::vector<std::string> aligned_yield(const ParseTree& tree) {
  const auto words = tree.yield();
  const auto tags = tree.tags();
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (is_punctuation_tag(tags[i])) continue;
    const bool clitic = !out.empty() && (words[i].front() == '\'' || words[i] == "n't");
    if (clitic) {
      out.back() += words[i];
    } else {
      out.push_back(words[i]);
    }
  }
  return out;
}

}  // namespace cohort
