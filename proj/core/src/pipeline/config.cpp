#include <json.hpp>

#include <cmath>
#include <set>

#include "cohort/common/error.hpp"
#include "cohort/pipeline/pipeline.hpp"
#include "common/hash.hpp"
#include "common/io.hpp"
#include "common/text_util.hpp"

namespace cohort {

using nlohmann::json;

std::string to_string(LabelScheme scheme) { return scheme == LabelScheme::Binary ? "binary" : "trinary"; }

std::vector<ModelGrid> default_model_grids() {
  std::vector<ModelGrid> grids;
  for (const auto kind : {ModelKind::RandomForest, ModelKind::GradientBoosting, ModelKind::SvmRbf, ModelKind::Mlp}) {
    grids.push_back({kind, {ModelSpec::defaults(kind)}});
  }
  return grids;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError("config: " + what); }

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) bad("unknown key '" + key + "' in " + where);
  }
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) bad(what + " must be an integer");
  return v.get<std::int64_t>();
}

LabelScheme parse_task(const json& v) {
  if (!v.is_string()) bad("task must be \"binary\" or \"trinary\"");
  const auto t = detail::to_lower(v.get<std::string>());
  if (t == "binary") return LabelScheme::Binary;
  if (t == "trinary") return LabelScheme::Trinary;
  bad("task must be \"binary\" or \"trinary\", not '" + v.get<std::string>() + "'");
}

// {"kind": "svm", "seed": 0, "params": {"c": 1}, "grid": {"c": [0.1, 1, 10]}}
ModelGrid parse_model(const json& m, std::size_t index) {
  const std::string where = "models[" + std::to_string(index) + "]";
  only_keys(m, where, {"kind", "seed", "params", "grid"});
  if (!m.contains("kind") || !m["kind"].is_string()) bad(where + ".kind is required");
  ModelGrid grid;
  grid.kind = parse_model_kind(m["kind"].get<std::string>());
  ModelSpec base = ModelSpec::defaults(grid.kind);
  if (m.contains("seed")) {
    const auto s = integer(m["seed"], where + ".seed");
    if (s < 0) bad(where + ".seed must be non-negative");
    base.seed = static_cast<std::uint64_t>(s);
  }
  if (m.contains("params")) {
    if (!m["params"].is_object()) bad(where + ".params must be an object");
    for (const auto& [name, value] : m["params"].items()) {
      set_hyperparameter(base.params, name, number(value, where + ".params." + name));
    }
  }
  grid.specs.push_back(base);
  if (m.contains("grid")) {
    if (!m["grid"].is_object()) bad(where + ".grid must be an object");
    for (const auto& [name, values] : m["grid"].items()) {
      if (!values.is_array() || values.empty()) bad(where + ".grid." + name + " must be a non-empty array");
      std::vector<ModelSpec> expanded;
      for (const auto& spec : grid.specs) {
        for (const auto& v : values) {
          ModelSpec s = spec;
          set_hyperparameter(s.params, name, number(v, where + ".grid." + name));
          expanded.push_back(s);
        }
      }
      grid.specs = std::move(expanded);
    }
  }
  for (const auto& s : grid.specs) validate(s);
  return grid;
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(doc, "config",
            {"manifests", "task", "tasks", "conditions", "alpha", "adasyn", "models", "split", "cv_folds", "lexicons",
             "output", "mmse_threshold", "fk_printed_sign"});
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  PipelineConfig c;
  c.config_hash = detail::hash_hex(json_text);

  if (!doc.contains("manifests") || !doc["manifests"].is_object() || doc["manifests"].empty()) {
    bad("'manifests' must map at least one source name to a manifest path");
  }
  for (const auto& [name, path] : doc["manifests"].items()) {
    if (!path.is_string()) bad("manifest path for '" + name + "' must be a string");
    c.manifests[name] = resolve(path.get<std::string>());
    if (!std::filesystem::exists(c.manifests[name])) {
      bad("manifest for '" + name + "' not found: " + c.manifests[name].string());
    }
  }

  if (doc.contains("task") && doc.contains("tasks")) bad("give either 'task' or 'tasks', not both");
  const json* tasks = doc.contains("tasks") ? &doc["tasks"] : doc.contains("task") ? &doc["task"] : nullptr;
  if (tasks) {
    c.tasks.clear();
    if (tasks->is_array()) {
      for (const auto& t : *tasks) c.tasks.push_back(parse_task(t));
    } else {
      c.tasks.push_back(parse_task(*tasks));
    }
    if (c.tasks.empty()) bad("at least one task is required");
  }

  if (!doc.contains("conditions") || !doc["conditions"].is_array() || doc["conditions"].empty()) {
    bad("'conditions' must be a non-empty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc["conditions"].size(); ++i) {
    const auto& cond = doc["conditions"][i];
    const std::string where = "conditions[" + std::to_string(i) + "]";
    only_keys(cond, where, {"name", "sources", "oversample"});
    ConditionSpec spec;
    if (!cond.contains("sources") || !cond["sources"].is_array() || cond["sources"].empty()) {
      bad(where + ".sources must be a non-empty array");
    }
    for (const auto& s : cond["sources"]) {
      if (!s.is_string()) bad(where + ".sources must hold strings");
      const auto name = s.get<std::string>();
      if (!c.manifests.contains(name)) bad(where + " names unknown source '" + name + "'");
      spec.sources.push_back(name);
    }
    if (cond.contains("oversample")) {
      if (!cond["oversample"].is_boolean()) bad(where + ".oversample must be true or false");
      spec.oversample = cond["oversample"].get<bool>();
    }
    if (cond.contains("name")) {
      if (!cond["name"].is_string()) bad(where + ".name must be a string");
      spec.name = cond["name"].get<std::string>();
    } else {
      spec.name = condition_name(spec.sources, spec.oversample);
    }
    if (!names.insert(spec.name).second) bad("duplicate condition name '" + spec.name + "'");
    c.conditions.push_back(std::move(spec));
  }

  if (doc.contains("alpha")) {
    c.alpha = number(doc["alpha"], "alpha");
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) bad("alpha must lie in (0, 1]");
  }
  if (doc.contains("adasyn")) {
    const auto& a = doc["adasyn"];
    only_keys(a, "adasyn", {"beta", "k"});
    if (a.contains("beta")) c.adasyn.beta = number(a["beta"], "adasyn.beta");
    if (a.contains("k")) {
      const auto k = integer(a["k"], "adasyn.k");
      if (k < 1) bad("adasyn.k must be at least 1");
      c.adasyn.k = static_cast<std::size_t>(k);
    }
    if (!(c.adasyn.beta >= 0.0 && std::isfinite(c.adasyn.beta))) bad("adasyn.beta must be non-negative");
  }
  if (doc.contains("models")) {
    if (!doc["models"].is_array() || doc["models"].empty()) bad("'models' must be a non-empty array");
    for (std::size_t i = 0; i < doc["models"].size(); ++i) c.models.push_back(parse_model(doc["models"][i], i));
  } else {
    c.models = default_model_grids();
  }
  if (doc.contains("split")) {
    const auto& s = doc["split"];
    only_keys(s, "split", {"ratio", "seeds"});
    if (s.contains("ratio")) c.split_ratio = number(s["ratio"], "split.ratio");
    if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) bad("split.ratio must lie in (0, 1)");
    if (s.contains("seeds")) {
      const auto& seeds = s["seeds"];
      c.seeds.clear();
      if (seeds.is_array()) {
        for (const auto& v : seeds) {
          const auto seed = integer(v, "split.seeds");
          if (seed < 0) bad("split.seeds must be non-negative");
          c.seeds.push_back(static_cast<std::uint64_t>(seed));
        }
      } else {
        const auto seed = integer(seeds, "split.seeds");
        if (seed < 0) bad("split.seeds must be non-negative");
        c.seeds.push_back(static_cast<std::uint64_t>(seed));
      }
      if (c.seeds.empty()) bad("split.seeds must not be empty");
    }
  }
  if (doc.contains("cv_folds")) {
    const auto folds = integer(doc["cv_folds"], "cv_folds");
    if (folds < 2) bad("cv_folds must be at least 2");
    c.cv_folds = static_cast<int>(folds);
  }
  if (doc.contains("lexicons")) {
    if (!doc["lexicons"].is_string()) bad("lexicons must be a path");
    c.lexicons = resolve(doc["lexicons"].get<std::string>());
    if (!std::filesystem::exists(c.lexicons)) bad("lexicon file not found: " + c.lexicons.string());
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) bad("output must be a path");
    c.output = resolve(doc["output"].get<std::string>());
  } else {
    c.output = base_dir / "out";
  }
  if (doc.contains("mmse_threshold")) {
    const auto t = integer(doc["mmse_threshold"], "mmse_threshold");
    if (t < 0 || t > 30) bad("mmse_threshold must lie in 0..30");
    c.mmse_threshold = static_cast<int>(t);
  }
  if (doc.contains("fk_printed_sign")) {
    if (!doc["fk_printed_sign"].is_boolean()) bad("fk_printed_sign must be true or false");
    c.fk_printed_sign = doc["fk_printed_sign"].get<bool>();
  }
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  const auto text = detail::read_file(path, "config");
  return parse_pipeline_config(text, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace cohort
