#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cohort/corpus/types.hpp"

namespace cohort {

/// One record of a dataset manifest. Paths are relative to the manifest's
/// directory unless absolute.
struct ManifestRecord {
  std::string transcript;
  std::optional<std::string> trees;
  std::string participant_id;
  std::optional<std::string> sample_id;
  Diagnosis diagnosis = Diagnosis::Control;
  std::optional<int> mmse;
  SourceTag source = SourceTag::DB;
};

/// Manifest document (JSON):
///   { "samples": [ { "transcript": "a.cha", "trees": "a.tree",
///                    "participant_id": "P1", "sample_id": "P1-0",
///                    "diagnosis": "AD", "mmse": 18, "source": "DB" }, ... ] }
std::vector<ManifestRecord> parse_manifest(std::string_view json_text);
std::string write_manifest(const std::vector<ManifestRecord>& records);

/// Reads every referenced transcript (and tree file), attaches trees to
/// utterances in order, and validates the assembled dataset.
CohortDataset load_manifest(const std::vector<ManifestRecord>& records,
                            const std::filesystem::path& base_dir);
CohortDataset load_manifest(const std::filesystem::path& manifest_path);

/// Attaches trees to the utterances that contain words, in order.
void attach_trees(Sample& sample, std::vector<ParseTree> trees);

}  // namespace cohort
