#include "cohort/features/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cohort/common/error.hpp"
#include "cohort/common/parallel.hpp"
#include "cohort/metrics/labels.hpp"
#include "common/log.hpp"

namespace cohort {

// ---------------------------------------------------------------------------
// FeatureVector

void FeatureVector::set(const std::string& name, double value) { values_[name] = value; }

void FeatureVector::set_missing(const std::string& name) { values_[name] = std::nullopt; }

void FeatureVector::merge(const FeatureVector& other) {
  for (const auto& [name, value] : other.values_) values_[name] = value;
}

bool FeatureVector::contains(std::string_view name) const { return values_.find(name) != values_.end(); }

bool FeatureVector::is_missing(std::string_view name) const {
  const auto it = values_.find(name);
  return it != values_.end() && !it->second.has_value();
}

std::optional<double> FeatureVector::get(std::string_view name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double FeatureVector::at(std::string_view name) const {
  const auto value = get(name);
  if (!value) throw std::out_of_range("feature '" + std::string(name) + "' is missing");
  return *value;
}

// ---------------------------------------------------------------------------
// Counting helpers

namespace {

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
    default: return false;
  }
}

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

bool has_tag(std::string_view tag, std::initializer_list<std::string_view> set) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

std::vector<ParseTree> trees_of(const Sample& sample) {
  std::vector<ParseTree> trees;
  for (const auto& u : sample.utterances) {
    if (u.tree) trees.push_back(*u.tree);
  }
  return trees;
}

void count_productions(const ParseTree& node, ProductionHistogram& hist) {
  if (node.is_preterminal()) return;
  std::vector<std::string> child_labels;
  child_labels.reserve(node.children().size());
  for (const auto& child : node.children()) child_labels.push_back(child.label());
  ++hist.counts[production_key(node.label(), child_labels)];
  ++hist.total_constituents;
  for (const auto& child : node.children()) count_productions(child, hist);
}

struct TextCounts {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
  std::size_t characters = 0;
};

TextCounts text_counts(const Sample& sample) {
  TextCounts c;
  for (const auto& u : sample.utterances) {
    const auto n = u.word_count();
    if (n == 0) continue;
    ++c.sentences;
    c.words += n;
    for (const auto& t : u.tokens) {
      if (!t.is_word) continue;
      c.syllables += static_cast<std::size_t>(count_syllables(t.surface));
      c.characters += code_points(t.surface);
    }
  }
  return c;
}

void require_words(const Sample& sample, const TextCounts& c) {
  if (c.words == 0) throw DataError("sample '" + sample.sample_id + "' has no word tokens");
}

}  // namespace

int count_syllables(std::string_view raw) {
  std::string word;
  for (char c : raw) {
    if (c == '\'' || c == '-') continue;
    word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  const bool alphabetic = !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
    return c >= 'a' && c <= 'z';
  });
  if (!alphabetic) {
    detail::logger().debug("non-alphabetic word '{}' counted as one syllable", raw);
    return 1;
  }
  int groups = 0;
  bool previous_vowel = false;
  for (char c : word) {
    const bool vowel = is_vowel(c);
    if (vowel && !previous_vowel) ++groups;
    previous_vowel = vowel;
  }
  const std::size_t n = word.size();
  const bool lone_final_e = word[n - 1] == 'e' && (n == 1 || !is_vowel(word[n - 2]));
  if (lone_final_e && groups > 1) --groups;
  return std::max(groups, 1);
}

std::string production_key(std::string_view parent, std::span<const std::string> children) {
  std::string key(parent);
  key += "->";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i > 0) key += '_';
    key += children[i];
  }
  return key;
}

std::string production_feature(std::string_view key) {
  return std::string(feature::kProductionPrefix) + std::string(key);
}

long ProductionHistogram::count(std::string_view key) const {
  const auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

void ProductionHistogram::add(const ProductionHistogram& other) {
  for (const auto& [key, n] : other.counts) counts[key] += n;
  total_constituents += other.total_constituents;
}

ProductionHistogram production_histogram(std::span<const ParseTree> trees) {
  ProductionHistogram hist;
  for (const auto& tree : trees) count_productions(tree, hist);
  return hist;
}

int count_t_units(const ParseTree& tree) {
  int units = 0;
  for (const auto& clause : tree.children()) {
    if (clause.label() != "S" || clause.is_preterminal()) continue;
    int conjoined = 0;
    bool has_conjunction = false;
    for (const auto& child : clause.children()) {
      if (child.label() == "S" && !child.is_preterminal()) ++conjoined;
      if (child.label() == "CC") has_conjunction = true;
    }
    units += (has_conjunction && conjoined >= 2) ? conjoined : 1;
  }
  return units;
}

double flesch_reading_ease(double words, double sentences, double syllables) {
  if (words <= 0.0 || sentences <= 0.0) throw DataError("Flesch score needs at least one word and sentence");
  return 206.835 - (1.015 * words / sentences + 84.6 * syllables / words);
}

double flesch_kincaid_grade(double words, double sentences, double syllables, bool printed_sign) {
  if (words <= 0.0 || sentences <= 0.0) throw DataError("Flesch-Kincaid needs at least one word and sentence");
  const double base = 0.39 * words / sentences + 11.8 * syllables / words;
  return printed_sign ? base + 15.59 : base - 15.59;
}

// ---------------------------------------------------------------------------
// Feature families

FeatureVector lexical_features(const Sample& sample) {
  const auto c = text_counts(sample);
  require_words(sample, c);
  FeatureVector out;
  const double words = static_cast<double>(c.words);
  out.set(std::string(feature::kMeanSyllables), static_cast<double>(c.syllables) / words);
  out.set(std::string(feature::kMeanWordLength), static_cast<double>(c.characters) / words);

  if (!sample.has_trees()) {
    out.set_missing(std::string(feature::kAdverbRatio));
    out.set_missing(std::string(feature::kPronounRatio));
    return out;
  }
  std::size_t adverbs = 0, pronouns = 0, nouns = 0;
  for (const auto& u : sample.utterances) {
    if (!u.tree) continue;
    for (const auto& tag : u.tree->tags()) {
      if (has_tag(tag, {"RB", "RBR", "RBS"})) ++adverbs;
      if (has_tag(tag, {"PRP", "PRP$"})) ++pronouns;
      if (has_tag(tag, {"NN", "NNS", "NNP", "NNPS"})) ++nouns;
    }
  }
  out.set(std::string(feature::kAdverbRatio), static_cast<double>(adverbs) / words);
  if (pronouns + nouns == 0) {
    out.set_missing(std::string(feature::kPronounRatio));
  } else {
    out.set(std::string(feature::kPronounRatio),
            static_cast<double>(pronouns) / static_cast<double>(pronouns + nouns));
  }
  return out;
}

namespace {
const std::vector<std::string>& named_productions() {
  static const std::vector<std::string> names = {
      "ROOT->S", "NP->PRP", "ADVP->RB", "S->ADVP_NP_VP", "S->CC_NP_VP", "S->NP_VP", "VP->VBZ_VP"};
  return names;
}
}  // namespace

FeatureVector syntactic_features(const Sample& sample) {
  FeatureVector out;
  const auto trees = trees_of(sample);
  if (!sample.has_trees() || trees.empty()) {
    out.set_missing(std::string(feature::kSentences));
    out.set_missing(std::string(feature::kTUnits));
    for (const auto& key : named_productions()) out.set_missing(production_feature(key));
    return out;
  }
  const auto words = static_cast<double>(sample.word_count());
  int t_units = 0;
  for (const auto& tree : trees) t_units += count_t_units(tree);
  out.set(std::string(feature::kSentences), static_cast<double>(trees.size()));
  if (words > 0) {
    out.set(std::string(feature::kTUnits), t_units / words);
  } else {
    out.set_missing(std::string(feature::kTUnits));
  }

  const auto hist = production_histogram(trees);
  const auto total = static_cast<double>(hist.total_constituents);
  for (const auto& [key, n] : hist.counts) out.set(production_feature(key), static_cast<double>(n) / total);
  for (const auto& key : named_productions()) {
    if (!out.contains(production_feature(key))) out.set(production_feature(key), 0.0);
  }
  return out;
}

FeatureVector semantic_similarity_features(const Sample& sample) {
  FeatureVector out;
  const std::string mean_name(feature::kMeanCosine);
  const std::string min_name(feature::kMinCosine);
  const std::string cutoff_name(feature::kCosineCutoff);

  // term-frequency bags
  std::vector<std::map<std::string, long, std::less<>>> bags;
  for (const auto& u : sample.utterances) {
    std::map<std::string, long, std::less<>> bag;
    for (const auto& t : u.tokens) {
      if (t.is_word) ++bag[t.surface];
    }
    bags.push_back(std::move(bag));
  }
  std::vector<long> squared_norm;
  for (const auto& bag : bags) {
    long s = 0;
    for (const auto& [w, n] : bag) s += n * n;
    squared_norm.push_back(s);
  }

  long pairs = 0, close = 0;
  double sum = 0.0;
  double minimum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bags.size(); ++i) {
    if (squared_norm[i] == 0) continue;
    for (std::size_t j = i + 1; j < bags.size(); ++j) {
      if (squared_norm[j] == 0) continue;
      long dot = 0;
      const auto& small = bags[i].size() <= bags[j].size() ? bags[i] : bags[j];
      const auto& large = bags[i].size() <= bags[j].size() ? bags[j] : bags[i];
      for (const auto& [w, n] : small) {
        const auto it = large.find(w);
        if (it != large.end()) dot += n * it->second;
      }
      const double similarity =
          static_cast<double>(dot) / std::sqrt(static_cast<double>(squared_norm[i] * squared_norm[j]));
      const double distance = std::clamp(1.0 - similarity, 0.0, 1.0);
      ++pairs;
      sum += distance;
      minimum = std::min(minimum, distance);
      if (distance < 0.5) ++close;
    }
  }
  if (pairs == 0) {
    out.set_missing(mean_name);
    out.set_missing(min_name);
    out.set_missing(cutoff_name);
    return out;
  }
  out.set(mean_name, sum / static_cast<double>(pairs));
  out.set(min_name, minimum);
  out.set(cutoff_name, static_cast<double>(close) / static_cast<double>(pairs));
  return out;
}

FeatureVector readability_features(const Sample& sample, const FeatureOptions& options) {
  const auto c = text_counts(sample);
  require_words(sample, c);
  const auto w = static_cast<double>(c.words);
  const auto s = static_cast<double>(c.sentences);
  const auto y = static_cast<double>(c.syllables);
  FeatureVector out;
  out.set(std::string(feature::kFlesch), flesch_reading_ease(w, s, y));
  out.set(std::string(feature::kFleschKincaid), flesch_kincaid_grade(w, s, y, options.fk_printed_sign));
  return out;
}

FeatureVector lexicon_features(const Sample& sample, const LexiconSet& lexicons) {
  FeatureVector out;
  long apostrophes = 0;
  std::vector<std::string_view> words;
  for (const auto& u : sample.utterances) {
    for (const auto& t : u.tokens) {
      apostrophes += std::count(t.surface.begin(), t.surface.end(), '\'');
      for (std::size_t p = t.surface.find("\xE2\x80\x99"); p != std::string::npos;
           p = t.surface.find("\xE2\x80\x99", p + 3)) {
        ++apostrophes;
      }
      if (t.is_word) words.push_back(t.surface);
    }
  }
  out.set(std::string(feature::kApostrophes), static_cast<double>(apostrophes));
  for (const auto& category : lexicons.category_names()) {
    const std::string name = std::string(feature::kLexiconPrefix) + category;
    if (words.empty()) {
      out.set(name, 0.0);
      continue;
    }
    const auto matches = std::count_if(words.begin(), words.end(), [&](std::string_view w) {
      return lexicons.category_matches(category, w);
    });
    out.set(name, static_cast<double>(matches) / static_cast<double>(words.size()));
  }
  return out;
}

FeatureVector valence_features(const Sample& sample, const LexiconSet& lexicons) {
  const auto& table = lexicons.valence();
  double total = 0.0;
  long utterances = 0;
  for (const auto& u : sample.utterances) {
    if (u.word_count() == 0) continue;
    ++utterances;
    double negative = 0.0;
    long matched = 0;
    for (const auto& t : u.tokens) {
      if (!t.is_word) continue;
      const auto it = table.find(t.surface);
      if (it == table.end()) continue;
      ++matched;
      negative += std::max(0.0, -it->second);
    }
    if (matched > 0) total += negative / static_cast<double>(matched);
  }
  FeatureVector out;
  out.set(std::string(feature::kNegativeSentiment), utterances > 0 ? total / static_cast<double>(utterances) : 0.0);
  return out;
}

FeatureVector extract_sample(const Sample& sample, const LexiconSet& lexicons, const FeatureOptions& options) {
  FeatureVector out = lexical_features(sample);
  out.merge(syntactic_features(sample));
  out.merge(semantic_similarity_features(sample));
  out.merge(readability_features(sample, options));
  out.merge(lexicon_features(sample, lexicons));
  out.merge(valence_features(sample, lexicons));
  return out;
}

// ---------------------------------------------------------------------------
// Registry and matrix assembly

FeatureRegistry::FeatureRegistry(std::vector<std::string> names) {
  for (auto& n : names) add(n);
}

void FeatureRegistry::add(const std::string& name) {
  if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
}

FeatureRegistry FeatureRegistry::standard(const LexiconSet& lexicons) {
  FeatureRegistry r;
  for (auto name : {feature::kMeanSyllables, feature::kMeanWordLength, feature::kAdverbRatio,
                    feature::kPronounRatio, feature::kSentences, feature::kTUnits}) {
    r.add(std::string(name));
  }
  for (const auto& key : named_productions()) r.add(production_feature(key));
  for (auto name : {feature::kMeanCosine, feature::kMinCosine, feature::kCosineCutoff, feature::kFlesch,
                    feature::kFleschKincaid, feature::kApostrophes}) {
    r.add(std::string(name));
  }
  for (const auto& category : lexicons.category_names()) {
    r.add(std::string(feature::kLexiconPrefix) + category);
  }
  r.add(std::string(feature::kNegativeSentiment));
  return r;
}

void FeatureRegistry::add_observed_productions(const CohortDataset& dataset, std::span<const std::size_t> rows) {
  std::set<std::string> keys;
  for (const auto row : rows) {
    const auto trees = trees_of(dataset[row]);
    for (const auto& [key, n] : production_histogram(trees).counts) keys.insert(key);
  }
  for (const auto& key : keys) add(production_feature(key));
}

void FeatureRegistry::validate(const LexiconSet& lexicons) const {
  static const std::set<std::string, std::less<>> fixed = {
      std::string(feature::kMeanSyllables), std::string(feature::kMeanWordLength),
      std::string(feature::kAdverbRatio),   std::string(feature::kPronounRatio),
      std::string(feature::kSentences),     std::string(feature::kTUnits),
      std::string(feature::kMeanCosine),    std::string(feature::kMinCosine),
      std::string(feature::kCosineCutoff),  std::string(feature::kFlesch),
      std::string(feature::kFleschKincaid), std::string(feature::kApostrophes),
      std::string(feature::kNegativeSentiment)};
  for (const auto& name : names_) {
    if (fixed.contains(name)) continue;
    if (name.starts_with(feature::kProductionPrefix) && name.size() > feature::kProductionPrefix.size() &&
        name.find("->") != std::string::npos) {
      continue;
    }
    if (name.starts_with(feature::kLexiconPrefix)) {
      const auto category = std::string_view(name).substr(feature::kLexiconPrefix.size());
      if (!lexicons.has_category(category)) {
        throw ConfigError("feature '" + name + "' references lexicon category '" + std::string(category) +
                          "' that the lexicon set does not define");
      }
      continue;
    }
    throw ConfigError("unknown feature '" + name + "'");
  }
}

FeatureMatrix extract_matrix(const CohortDataset& dataset, const FeatureRegistry& registry,
                             const LexiconSet& lexicons, const ExtractOptions& options) {
  registry.validate(lexicons);
  const std::size_t n = dataset.size();
  const auto& names = registry.names();

  std::vector<FeatureVector> vectors(n);
  parallel_for(n, [&](std::size_t i) { vectors[i] = extract_sample(dataset[i], lexicons, options.features); });

  FeatureMatrix m;
  m.feature_names = names;
  m.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size()));
  constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sample = dataset[i];
    const bool trees = sample.has_trees();
    for (std::size_t c = 0; c < names.size(); ++c) {
      double value = kMissing;
      if (const auto v = vectors[i].get(names[c])) {
        value = *v;
      } else if (!vectors[i].contains(names[c]) && names[c].starts_with(feature::kProductionPrefix) && trees) {
        value = 0.0;
      }
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = value;
    }
    m.groups.push_back(sample.participant_id);
    m.sample_ids.push_back(sample.sample_id);
    if (options.labels == LabelScheme::Binary) {
      m.labels.push_back(label_binary(sample));
    } else {
      m.labels.push_back(static_cast<int>(label_trinary(sample, options.mmse_threshold)));
    }
  }
  m.class_names = options.labels == LabelScheme::Binary
                      ? std::vector<std::string>{"Control", "AD"}
                      : std::vector<std::string>{"Control", "Mild", "Moderate"};

  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto missing = m.values.col(static_cast<Eigen::Index>(c)).array().isNaN().count();
    if (n > 0 && 2 * static_cast<std::size_t>(missing) > n) {
      detail::logger().warn("feature '{}' is missing for {} of {} samples", names[c], missing, n);
    }
  }
  return m;
}

ColumnImputer ColumnImputer::fit(const Matrix& values, std::span<const std::size_t> rows) {
  ColumnImputer imputer;
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    double sum = 0.0;
    long count = 0;
    for (const auto r : rows) {
      const double v = values(static_cast<Eigen::Index>(r), c);
      if (std::isnan(v)) continue;
      sum += v;
      ++count;
    }
    if (count == 0) {
      detail::logger().warn("column {} has no observed training values; imputing 0", c);
    }
    imputer.means.push_back(count > 0 ? sum / static_cast<double>(count) : 0.0);
  }
  return imputer;
}

void ColumnImputer::apply(Matrix& values) const {
  if (static_cast<std::size_t>(values.cols()) != means.size()) {
    throw ValidationError("imputer was fit on a different column count");
  }
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (std::isnan(values(r, c))) values(r, c) = means[static_cast<std::size_t>(c)];
    }
  }
}

Standardizer Standardizer::fit(const Matrix& values, std::span<const std::size_t> rows) {
  if (rows.empty()) throw DataError("standardizer needs at least one row");
  Standardizer s;
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    double mean = 0.0;
    for (const auto r : rows) mean += values(static_cast<Eigen::Index>(r), c);
    mean /= static_cast<double>(rows.size());
    double var = 0.0;
    for (const auto r : rows) {
      const double d = values(static_cast<Eigen::Index>(r), c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(rows.size());
    const double sd = std::sqrt(var);
    s.mean.push_back(mean);
    s.scale.push_back(sd > 1e-12 ? sd : 1.0);
  }
  return s;
}

Standardizer Standardizer::fit(const Matrix& values) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(values.rows()));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return fit(values, rows);
}

void Standardizer::apply(Matrix& values) const {
  if (static_cast<std::size_t>(values.cols()) != mean.size()) {
    throw ValidationError("standardizer was fit on a different column count");
  }
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    const auto k = static_cast<std::size_t>(c);
    values.col(c) = (values.col(c).array() - mean[k]) / scale[k];
  }
}

}  // namespace cohort
