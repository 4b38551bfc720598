#include <gtest/gtest.h>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/corpus/tree.hpp"

namespace cohort {
namespace {

TEST(ParseTreebank, ReadsYieldAndTags) {
  const auto trees = parse_treebank("(ROOT (S (NP (DT the) (NN sink))))");
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].yield(), (std::vector<std::string>{"the", "sink"}));
  EXPECT_EQ(trees[0].tags(), (std::vector<std::string>{"DT", "NN"}));
  EXPECT_EQ(trees[0].label(), "ROOT");
}

TEST(ParseTreebank, SeveralTreesAnyWhitespace) {
  const auto trees = parse_treebank("(ROOT (S (NP (PRP he))\n  (VP (VBZ runs))))\n\n(ROOT\t(NP (NN water)))");
  ASSERT_EQ(trees.size(), 2u);
  EXPECT_EQ(trees[1].yield(), std::vector<std::string>{"water"});
}

TEST(ParseTreebank, EmptyOuterLabelIsRoot) {
  const auto trees = parse_treebank("( (S (NP (PRP he)) (VP (VBZ runs))))");
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].label(), "ROOT");
}

TEST(ParseTreebank, LowercasesWordsKeepsLabels) {
  const auto trees = parse_treebank("(ROOT (NP (NNP Mary)))");
  EXPECT_EQ(trees[0].yield(), std::vector<std::string>{"mary"});
  EXPECT_EQ(trees[0].tags(), std::vector<std::string>{"NNP"});
}

TEST(ParseTreebank, UnbalancedReportsPosition) {
  try {
    parse_treebank("(ROOT (S (NP (PRP he)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_GT(e.column(), 0);
  }
  EXPECT_THROW(parse_treebank("(ROOT (NP (NN a))))"), ParseError);
}

TEST(ParseTreebank, RejectsStructuralViolations) {
  EXPECT_THROW(parse_treebank("(ROOT (S he (VP (VBZ runs))))"), ParseError);
  EXPECT_THROW(parse_treebank("(S (NP (PRP he)))"), ParseError);
  EXPECT_THROW(parse_treebank("(ROOT ())"), ParseError);
}

TEST(ParseTree, ConstructorsEnforceShape) {
  EXPECT_THROW(ParseTree::internal("S", {}), ValidationError);
  EXPECT_THROW(ParseTree::preterminal("NN", ""), ValidationError);
}

// Random trees over a small grammar, printed and re-read.
ParseTree random_tree(Rng& rng, int depth) {
  static const std::vector<std::string> phrases{"S", "NP", "VP", "PP", "ADVP", "SBAR"};
  static const std::vector<std::string> tags{"NN", "VBZ", "DT", "PRP", "RB", "IN"};
  static const std::vector<std::string> words{"boy", "is", "the", "he", "now", "on", "cookie"};
  if (depth == 0 || rng.uniform() < 0.3) {
    return ParseTree::preterminal(tags[rng.index(tags.size())], words[rng.index(words.size())]);
  }
  std::vector<ParseTree> children;
  const auto n = 1 + rng.index(3);
  for (std::size_t i = 0; i < n; ++i) children.push_back(random_tree(rng, depth - 1));
  return ParseTree::internal(phrases[rng.index(phrases.size())], std::move(children));
}

TEST(ParseTree, BracketedRoundTrip) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto tree = ParseTree::internal("ROOT", {random_tree(rng, 5)});
    const auto again = parse_treebank(tree.to_bracketed());
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0], tree) << tree.to_bracketed();
  }
}

TEST(AlignedYield, DropsPunctuationRejoinsClitics) {
  const auto trees = parse_treebank("(ROOT (S (NP (PRP it)) (VP (VBZ 's) (ADJP (JJ wet))) (. .)))");
  EXPECT_EQ(aligned_yield(trees[0]), (std::vector<std::string>{"it's", "wet"}));
  const auto neg = parse_treebank("(ROOT (S (NP (PRP he)) (VP (VBZ does) (RB n't) (VP (VB know)))))");
  EXPECT_EQ(aligned_yield(neg[0]), (std::vector<std::string>{"he", "doesn't", "know"}));
  EXPECT_TRUE(is_punctuation_tag("."));
  EXPECT_TRUE(is_punctuation_tag(","));
  EXPECT_FALSE(is_punctuation_tag("NN"));
}

}  // namespace
}  // namespace cohort
