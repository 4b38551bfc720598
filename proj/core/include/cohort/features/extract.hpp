#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cohort/corpus/types.hpp"
#include "cohort/features/feature_matrix.hpp"
#include "cohort/features/lexicon.hpp"

namespace cohort {

/// Feature name -> value; a present key with no value is an explicit missing.
class FeatureVector {
 public:
  void set(const std::string& name, double value);
  void set_missing(const std::string& name);
  void merge(const FeatureVector& other);

  bool contains(std::string_view name) const;
  bool is_missing(std::string_view name) const;
  /// Value, or nullopt when missing or absent.
  std::optional<double> get(std::string_view name) const;
  /// Value; throws std::out_of_range when missing or absent.
  double at(std::string_view name) const;

  const std::map<std::string, std::optional<double>, std::less<>>& entries() const noexcept {
    return values_;
  }

 private:
  std::map<std::string, std::optional<double>, std::less<>> values_;
};

namespace feature {
inline constexpr std::string_view kMeanSyllables = "mean_syl_per_word";
inline constexpr std::string_view kMeanWordLength = "mean_word_length";
inline constexpr std::string_view kAdverbRatio = "adverb_ratio";
inline constexpr std::string_view kPronounRatio = "prp_ratio";
inline constexpr std::string_view kSentences = "S";
inline constexpr std::string_view kTUnits = "T";
inline constexpr std::string_view kMeanCosine = "mean_cos_dist";
inline constexpr std::string_view kMinCosine = "min_cos_dist";
inline constexpr std::string_view kCosineCutoff = "cos_cutoff_05";
inline constexpr std::string_view kFlesch = "flesch";
inline constexpr std::string_view kFleschKincaid = "flesch_kincaid";
inline constexpr std::string_view kApostrophes = "apostro";
inline constexpr std::string_view kNegativeSentiment = "neg_sentiment";
inline constexpr std::string_view kProductionPrefix = "prod:";
inline constexpr std::string_view kLexiconPrefix = "lex:";
}  // namespace feature

struct FeatureOptions {
  /// Adds 15.59 in the grade-level formula instead of subtracting it.
  bool fk_printed_sign = false;
};

/// Vowel-group syllable heuristic (a, e, i, o, u, y), discounting a lone
/// trailing 'e' unless that would leave zero. Words with characters other than
/// letters, apostrophes and hyphens count as one syllable.
int count_syllables(std::string_view word);

/// Production key "PARENT->CHILD1_CHILD2" and its feature name "prod:<key>".
std::string production_key(std::string_view parent, std::span<const std::string> children);
std::string production_feature(std::string_view key);

/// Counts of internal expansions; preterminal -> word expansions excluded.
struct ProductionHistogram {
  std::map<std::string, long, std::less<>> counts;
  long total_constituents = 0;

  long count(std::string_view key) const;
  void add(const ProductionHistogram& other);
};

ProductionHistogram production_histogram(std::span<const ParseTree> trees);

/// Main clauses: each S child of ROOT, or its directly conjoined S children
/// when that S coordinates clauses with CC.
int count_t_units(const ParseTree& tree);

double flesch_reading_ease(double words, double sentences, double syllables);
double flesch_kincaid_grade(double words, double sentences, double syllables, bool printed_sign = false);

FeatureVector lexical_features(const Sample& sample);
FeatureVector syntactic_features(const Sample& sample);
FeatureVector semantic_similarity_features(const Sample& sample);
FeatureVector readability_features(const Sample& sample, const FeatureOptions& options = {});
FeatureVector lexicon_features(const Sample& sample, const LexiconSet& lexicons);
FeatureVector valence_features(const Sample& sample, const LexiconSet& lexicons);

/// Every family above, plus one "prod:" entry per production observed in the
/// sample's trees.
FeatureVector extract_sample(const Sample& sample, const LexiconSet& lexicons,
                             const FeatureOptions& options = {});

/// Ordered, duplicate-free list of feature names to extract.
class FeatureRegistry {
 public:
  FeatureRegistry() = default;
  explicit FeatureRegistry(std::vector<std::string> names);

  /// The named lexical, syntactic, similarity and subjective features, with one
  /// "lex:" column per lexicon category.
  static FeatureRegistry standard(const LexiconSet& lexicons);

  void add(const std::string& name);
  /// Appends a "prod:" feature for every production observed in the given
  /// samples (sorted by key for a stable order).
  void add_observed_productions(const CohortDataset& dataset, std::span<const std::size_t> rows);

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

  /// Throws ConfigError for unknown names or categories absent from `lexicons`.
  void validate(const LexiconSet& lexicons) const;

 private:
  std::vector<std::string> names_;
};

enum class LabelScheme { Binary, Trinary };

struct ExtractOptions {
  FeatureOptions features;
  LabelScheme labels = LabelScheme::Binary;
  int mmse_threshold = 10;
};

/// Rows in dataset order. Missing values stay NaN; imputation is fit separately
/// on training rows (see ColumnImputer).
FeatureMatrix extract_matrix(const CohortDataset& dataset, const FeatureRegistry& registry,
                             const LexiconSet& lexicons, const ExtractOptions& options = {});

/// Per-column mean imputation fit on a subset of rows.
struct ColumnImputer {
  std::vector<double> means;

  static ColumnImputer fit(const Matrix& values, std::span<const std::size_t> rows);
  void apply(Matrix& values) const;
};

/// Per-column z-scoring fit on a subset of rows; zero-variance columns are only
/// centred.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& values, std::span<const std::size_t> rows);
  static Standardizer fit(const Matrix& values);
  void apply(Matrix& values) const;
};

}  // namespace cohort
