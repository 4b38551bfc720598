#include "cohort/corpus/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/corpus/manifest.hpp"
#include "common/io.hpp"

namespace cohort {
namespace {

constexpr std::array<std::string_view, 20> kNouns = {
    "boy",   "girl",   "mother", "sink",     "water", "jar",     "stool",
    "cookie", "curtain", "window", "plate", "dish",  "cupboard", "floor",
    "kitchen", "garden", "lid",   "counter", "towel", "woman"};
constexpr std::array<std::string_view, 10> kProgressive = {
    "stealing", "washing", "drying", "holding", "reaching",
    "taking",   "grabbing", "spilling", "handing", "dropping"};
constexpr std::array<std::string_view, 8> kIntransitive = {
    "overflows", "falls", "runs", "tips", "laughs", "spills", "drips", "watches"};
constexpr std::array<std::string_view, 7> kAdverbs = {"still", "also", "just", "now",
                                                      "probably", "really", "almost"};
constexpr std::array<std::string_view, 8> kAdjectives = {"little", "big", "tall", "wet",
                                                         "open", "full", "young", "dirty"};
constexpr std::array<std::string_view, 7> kPrepositions = {"on", "in", "from", "over",
                                                           "near", "behind", "under"};
constexpr std::array<std::string_view, 3> kPronouns = {"he", "she", "it"};
constexpr std::array<std::string_view, 3> kFillers = {"&uh", "&um", "&hm"};

// Per-group generation probabilities; `shift` in [-1, 1] moves the impaired
// group away from the shared baseline.
struct StyleParams {
  double pronoun;
  double adjective;
  double prepositional;
  double compound;
  double adverb;
  double fragment;
  double repeat;
  double filler;
  std::size_t vocabulary;

  static StyleParams for_shift(double t) {
    StyleParams p{};
    p.pronoun = 0.25 + 0.20 * t;
    p.adjective = 0.40 - 0.25 * t;
    p.prepositional = 0.50 - 0.30 * t;
    p.compound = 0.25 - 0.20 * t;
    p.adverb = 0.20 - 0.10 * t;
    p.fragment = 0.10 + 0.08 * t;
    p.repeat = std::max(0.0, 0.10 + 0.25 * t);
    p.filler = 0.15 + 0.10 * t;
    const double shrink = std::max(0.0, t) * static_cast<double>(kNouns.size() - 6);
    p.vocabulary = kNouns.size() - static_cast<std::size_t>(std::lround(shrink));
    return p;
  }
};

class UtteranceGrammar {
 public:
  UtteranceGrammar(const StyleParams& style, Rng& rng) : style_(style), rng_(rng) {}

  ParseTree utterance() {
    if (rng_.bernoulli(style_.fragment)) {
      return ParseTree::internal("ROOT", {object_np(false)});
    }
    if (rng_.bernoulli(style_.compound)) {
      return ParseTree::internal(
          "ROOT", {ParseTree::internal("S", {clause(false), leaf("CC", "and"), clause(false)})});
    }
    return ParseTree::internal("ROOT", {clause(true)});
  }

 private:
  template <std::size_t N>
  std::string pick(const std::array<std::string_view, N>& pool, std::size_t limit = N) {
    return std::string(pool[rng_.index(std::min(limit, N))]);
  }

  static ParseTree leaf(std::string tag, std::string word) {
    return ParseTree::preterminal(std::move(tag), std::move(word));
  }

  ParseTree noun_np(bool allow_plural) {
    std::vector<ParseTree> parts;
    parts.push_back(leaf("DT", "the"));
    if (rng_.bernoulli(style_.adjective)) parts.push_back(leaf("JJ", pick(kAdjectives)));
    std::string noun = pick(kNouns, style_.vocabulary);
    if (allow_plural && rng_.bernoulli(0.2)) {
      parts.push_back(leaf("NNS", noun + "s"));
    } else {
      parts.push_back(leaf("NN", std::move(noun)));
    }
    return ParseTree::internal("NP", std::move(parts));
  }

  ParseTree subject_np() {
    if (rng_.bernoulli(style_.pronoun)) {
      return ParseTree::internal("NP", {leaf("PRP", pick(kPronouns))});
    }
    return noun_np(false);
  }

  ParseTree object_np(bool allow_pronoun) {
    if (allow_pronoun && rng_.bernoulli(style_.pronoun * 0.5)) {
      return ParseTree::internal("NP", {leaf("PRP", "it")});
    }
    return noun_np(true);
  }

  ParseTree pp() {
    return ParseTree::internal("PP", {leaf("IN", pick(kPrepositions)), noun_np(false)});
  }

  ParseTree vp() {
    if (rng_.bernoulli(0.6)) {
      std::vector<ParseTree> inner;
      inner.push_back(leaf("VBG", pick(kProgressive)));
      inner.push_back(object_np(true));
      if (rng_.bernoulli(style_.prepositional)) inner.push_back(pp());
      return ParseTree::internal(
          "VP", {leaf("VBZ", "is"), ParseTree::internal("VP", std::move(inner))});
    }
    std::vector<ParseTree> parts;
    parts.push_back(leaf("VBZ", pick(kIntransitive)));
    if (rng_.bernoulli(style_.prepositional)) parts.push_back(pp());
    return ParseTree::internal("VP", std::move(parts));
  }

  ParseTree clause(bool allow_adverb) {
    std::vector<ParseTree> parts;
    if (allow_adverb && rng_.bernoulli(style_.adverb)) {
      parts.push_back(ParseTree::internal("ADVP", {leaf("RB", pick(kAdverbs))}));
    }
    parts.push_back(subject_np());
    parts.push_back(vp());
    return ParseTree::internal("S", std::move(parts));
  }

  const StyleParams& style_;
  Rng& rng_;
};

Utterance realize(ParseTree tree, const StyleParams& style, Rng& rng) {
  Utterance u;
  if (rng.bernoulli(style.filler)) {
    u.tokens.push_back({std::string(kFillers[rng.index(kFillers.size())]), false});
  }
  for (auto& w : tree.yield()) u.tokens.push_back({std::move(w), true});
  u.tree = std::move(tree);
  return u;
}

std::vector<Utterance> transcript(const StyleParams& style, const SyntheticCohortSpec& spec, Rng& rng) {
  UtteranceGrammar grammar(style, rng);
  const int span = std::max(0, spec.max_utterances - spec.min_utterances);
  const int count = spec.min_utterances + static_cast<int>(rng.index(static_cast<std::size_t>(span) + 1));
  std::vector<Utterance> out;
  for (int i = 0; i < count; ++i) {
    if (!out.empty() && rng.bernoulli(style.repeat)) {
      const auto& earlier = out[rng.index(out.size())];
      out.push_back(realize(*earlier.tree, style, rng));
    } else {
      out.push_back(realize(grammar.utterance(), style, rng));
    }
  }
  return out;
}

std::string padded(int value) {
  std::string digits = std::to_string(value);
  return std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

void emit_group(std::vector<Sample>& out, int sample_count, Diagnosis diagnosis,
                const StyleParams& style, const SyntheticCohortSpec& spec, Rng& rng) {
  const bool impaired = diagnosis == Diagnosis::AD;
  int participant = 0;
  int remaining = sample_count;
  while (remaining > 0) {
    ++participant;
    const int visits = std::min(remaining, 1 + static_cast<int>(rng.index(static_cast<std::size_t>(spec.max_visits))));
    const std::string pid = spec.id_prefix + (impaired ? "I" : "C") + padded(participant);
    const int base_mmse = impaired ? 4 + static_cast<int>(rng.index(23)) : 26 + static_cast<int>(rng.index(5));
    for (int v = 0; v < visits; ++v) {
      Sample s;
      s.participant_id = pid;
      s.sample_id = pid + "-v" + std::to_string(v + 1);
      s.diagnosis = diagnosis;
      s.mmse = std::clamp(base_mmse - static_cast<int>(rng.index(3)) * v, 0, 30);
      s.source = SourceTag::SYNTH;
      s.utterances = transcript(style, spec, rng);
      out.push_back(std::move(s));
    }
    remaining -= visits;
  }
}

}  // namespace

CohortDataset generate_synthetic_cohort(const SyntheticCohortSpec& spec, std::uint64_t seed) {
  if (spec.control < 1 || spec.impaired < 1) throw DataError("synthetic group sizes must be at least 1");
  if (!std::isfinite(spec.effect)) throw DataError("synthetic effect size must be finite");
  if (spec.max_visits < 1 || spec.min_utterances < 2 || spec.max_utterances < spec.min_utterances) {
    throw DataError("synthetic cohort needs max_visits >= 1 and 2 <= min_utterances <= max_utterances");
  }
  const double shift = std::clamp(spec.effect, -1.0, 1.0);
  const StyleParams control_style = StyleParams::for_shift(0.0);
  const StyleParams impaired_style = StyleParams::for_shift(shift);

  Rng rng(seed);
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(spec.control + spec.impaired));
  emit_group(samples, spec.control, Diagnosis::Control, control_style, spec, rng);
  emit_group(samples, spec.impaired, Diagnosis::AD, impaired_style, spec, rng);
  return CohortDataset(std::move(samples));
}

std::string render_chat(const Sample& sample) {
  std::string out = "@Begin\n@Languages:\teng\n@Participants:\tPAR Participant, INV Investigator\n";
  out += "@Comment:\tsample " + sample.sample_id + "\n";
  for (const auto& u : sample.utterances) {
    out += "*PAR:\t";
    for (const auto& t : u.tokens) {
      out += t.surface;
      out += ' ';
    }
    out += ".\n";
  }
  out += "@End\n";
  return out;
}

std::string render_trees(const Sample& sample) {
  std::string out;
  for (const auto& u : sample.utterances) {
    if (u.tree) out += u.tree->to_bracketed() + "\n";
  }
  return out;
}

std::filesystem::path write_cohort_files(const CohortDataset& dataset, const std::filesystem::path& dir) {
  std::vector<ManifestRecord> records;
  records.reserve(dataset.size());
  for (const auto& s : dataset.samples()) {
    ManifestRecord r;
    r.transcript = s.sample_id + ".cha";
    detail::write_file(dir / r.transcript, render_chat(s));
    if (s.has_trees()) {
      r.trees = s.sample_id + ".tree";
      detail::write_file(dir / *r.trees, render_trees(s));
    }
    r.participant_id = s.participant_id;
    r.sample_id = s.sample_id;
    r.diagnosis = s.diagnosis;
    r.mmse = s.mmse;
    r.source = s.source;
    records.push_back(std::move(r));
  }
  const auto manifest = dir / "manifest.json";
  detail::write_file(manifest, write_manifest(records));
  return manifest;
}

}  // namespace cohort
