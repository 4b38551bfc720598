#include "cohort/corpus/manifest.hpp"

#include <json.hpp>

#include "cohort/common/error.hpp"
#include "cohort/common/parallel.hpp"
#include "cohort/corpus/chat.hpp"
#include "common/io.hpp"

namespace cohort {

using nlohmann::json;

std::vector<ManifestRecord> parse_manifest(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what(), 0, e.byte);
  }
  const json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("samples")) throw ConfigError("manifest object lacks a 'samples' list");
    list = &doc.at("samples");
  }
  if (!list->is_array()) throw ConfigError("manifest 'samples' must be a list");

  std::vector<ManifestRecord> records;
  records.reserve(list->size());
  std::size_t index = 0;
  for (const auto& item : *list) {
    const std::string label = "manifest record " + std::to_string(index++);
    if (!item.is_object()) throw ConfigError(label + " is not an object");
    try {
      ManifestRecord r;
      r.transcript = item.at("transcript").get<std::string>();
      if (item.contains("trees") && !item["trees"].is_null()) r.trees = item["trees"].get<std::string>();
      r.participant_id = item.at("participant_id").get<std::string>();
      if (item.contains("sample_id")) r.sample_id = item["sample_id"].get<std::string>();
      r.diagnosis = parse_diagnosis(item.at("diagnosis").get<std::string>());
      if (item.contains("mmse") && !item["mmse"].is_null()) r.mmse = item["mmse"].get<int>();
      r.source = parse_source_tag(item.value("source", std::string("DB")));
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ConfigError(label + ": " + e.what());
    }
  }
  return records;
}

std::string write_manifest(const std::vector<ManifestRecord>& records) {
  json list = json::array();
  for (const auto& r : records) {
    json item;
    item["transcript"] = r.transcript;
    if (r.trees) item["trees"] = *r.trees;
    item["participant_id"] = r.participant_id;
    if (r.sample_id) item["sample_id"] = *r.sample_id;
    item["diagnosis"] = std::string(to_string(r.diagnosis));
    if (r.mmse) item["mmse"] = *r.mmse;
    item["source"] = std::string(to_string(r.source));
    list.push_back(std::move(item));
  }
  return json{{"samples", list}}.dump(2) + "\n";
}

void attach_trees(Sample& sample, std::vector<ParseTree> trees) {
  std::size_t next = 0;
  for (auto& u : sample.utterances) {
    if (u.word_count() == 0) continue;
    if (next >= trees.size()) {
      throw ValidationError("sample '" + sample.sample_id + "': fewer trees (" +
                            std::to_string(trees.size()) + ") than utterances with words");
    }
    try {
      u.attach_tree(std::move(trees[next++]));
    } catch (const ValidationError& e) {
      throw ValidationError("sample '" + sample.sample_id + "', tree " + std::to_string(next) + ": " + e.what());
    }
  }
  if (next != trees.size()) {
    throw ValidationError("sample '" + sample.sample_id + "': " + std::to_string(trees.size()) +
                          " trees for " + std::to_string(next) + " utterances with words");
  }
}

CohortDataset load_manifest(const std::vector<ManifestRecord>& records,
                            const std::filesystem::path& base_dir) {
  if (records.empty()) throw DataError("manifest lists zero samples");

  std::vector<Sample> samples(records.size());
  parallel_for(records.size(), [&](std::size_t i) {
    const auto& r = records[i];
    const auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    const auto transcript_path = resolve(r.transcript);
    const std::string sample_name =
        r.sample_id.value_or(transcript_path.stem().string());
    const std::string what = "transcript of sample '" + sample_name + "'";

    const std::string text = detail::read_file(transcript_path, what);
    Sample s;
    try {
      s = transcript_path.extension() == ".cha" ? parse_chat(text) : parse_plain_transcript(text);
    } catch (const ParseError& e) {
      throw ParseError(transcript_path.string() + ": " + e.what(), e.line(), e.column());
    } catch (const DataError& e) {
      throw DataError("sample '" + sample_name + "': " + e.what());
    }
    s.participant_id = r.participant_id;
    s.sample_id = sample_name;
    s.diagnosis = r.diagnosis;
    s.mmse = r.mmse;
    s.source = r.source;
    if (r.trees) {
      const auto tree_path = resolve(*r.trees);
      const std::string tree_text =
          detail::read_file(tree_path, "tree file of sample '" + sample_name + "'");
      std::vector<ParseTree> trees;
      try {
        trees = parse_treebank(tree_text);
      } catch (const ParseError& e) {
        throw ParseError(tree_path.string() + ": " + e.what(), e.line(), e.column());
      }
      attach_trees(s, std::move(trees));
    }
    samples[i] = std::move(s);
  });
  return CohortDataset(std::move(samples));
}

CohortDataset load_manifest(const std::filesystem::path& manifest_path) {
  const auto text = detail::read_file(manifest_path, "manifest");
  return load_manifest(parse_manifest(text), manifest_path.parent_path());
}

}  // namespace cohort
