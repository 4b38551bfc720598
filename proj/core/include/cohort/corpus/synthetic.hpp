#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cohort/corpus/types.hpp"

namespace cohort {

/// Group sizes are sample counts. `effect` is clamped to [-1, 1]; 0 makes both
/// groups draw from one distribution, positive values make the impaired group
/// produce shorter utterances, more pronouns and more repeated content.
struct SyntheticCohortSpec {
  int control = 10;
  int impaired = 10;
  double effect = 0.0;
  int max_visits = 3;
  int min_utterances = 6;
  int max_utterances = 12;
  /// Prepended to participant ids, so cohorts can be merged.
  std::string id_prefix;
};

CohortDataset generate_synthetic_cohort(const SyntheticCohortSpec& spec, std::uint64_t seed);

/// Writes one .cha and one .tree file per sample plus manifest.json into dir.
/// Returns the manifest path.
std::filesystem::path write_cohort_files(const CohortDataset& dataset,
                                         const std::filesystem::path& dir);

/// CHAT rendering of a sample (`*PAR:` tiers only) and its tree file text.
std::string render_chat(const Sample& sample);
std::string render_trees(const Sample& sample);

}  // namespace cohort
