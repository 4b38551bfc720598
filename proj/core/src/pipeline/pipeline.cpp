#include "cohort/pipeline/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <mutex>
#include <set>

#include "cohort/common/error.hpp"
#include "cohort/common/parallel.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/corpus/manifest.hpp"
#include "cohort/metrics/scores.hpp"
#include "common/csv.hpp"
#include "common/hash.hpp"
#include "common/io.hpp"
#include "common/log.hpp"

namespace cohort {

using nlohmann::json;

FeatureRegistry job_registry(const CohortDataset& dataset, std::span<const std::size_t> train_rows,
                             const LexiconSet& lexicons) {
  auto registry = FeatureRegistry::standard(lexicons);
  registry.add_observed_productions(dataset, train_rows);
  return registry;
}

namespace {

FeatureMatrix with_rows_resampled(const FeatureMatrix& base, const ResampleOutcome& r) {
  FeatureMatrix out;
  out.feature_names = base.feature_names;
  out.class_names = base.class_names;
  out.values = r.features;
  out.labels = r.labels;
  std::map<std::size_t, int> synthetic_index;
  for (std::size_t i = 0; i < r.source_rows.size(); ++i) {
    const auto src = r.source_rows[i];
    out.groups.push_back(base.groups[src]);
    if (r.synthetic_flags[i]) {
      out.sample_ids.push_back(base.sample_ids[src] + "#syn" + std::to_string(++synthetic_index[src]));
    } else {
      out.sample_ids.push_back(base.sample_ids[src]);
    }
  }
  return out;
}

}  // namespace

ConditionOutcome train_condition(const FeatureMatrix& raw, const SplitAssignment& split, const TrainingPlan& plan,
                                 std::uint64_t seed) {
  raw.check_shape();
  ConditionOutcome out;
  out.registry = raw.feature_names;
  const int n_classes = static_cast<int>(raw.class_names.size());

  out.imputer = ColumnImputer::fit(raw.values, split.train_indices);
  FeatureMatrix imputed = raw;
  out.imputer.apply(imputed.values);
  FeatureMatrix train = imputed.select_rows(split.train_indices);
  FeatureMatrix test = imputed.select_rows(split.test_indices);

  out.selection = select_features(train, plan.alpha);
  if (out.selection.selected.empty()) {
    throw DataError("no feature reaches p <= " + detail::format_double(plan.alpha) + " on the training rows");
  }
  train = train.select_columns(out.selection.selected);
  test = test.select_columns(out.selection.selected);
  out.standardizer = Standardizer::fit(train.values);
  out.standardizer.apply(train.values);
  out.standardizer.apply(test.values);

  if (plan.oversample) {
    AdasynParams params = plan.adasyn;
    params.seed = derive_seed(seed, 0xada5);
    const auto resampled = n_classes == 2 ? adasyn(train.values, train.labels, params)
                                          : adasyn_one_vs_rest(train.values, train.labels, params);
    train = with_rows_resampled(train, resampled);
    out.synthetic_flags = resampled.synthetic_flags;
  } else {
    out.synthetic_flags.assign(train.rows(), false);
  }

  for (std::size_t m = 0; m < plan.models.size(); ++m) {
    std::vector<ModelSpec> grid = plan.models[m].specs;
    for (auto& spec : grid) spec.seed = derive_seed(seed, (static_cast<std::uint64_t>(m + 1) << 32) ^ spec.seed);
    auto cv = grid_search_cv(grid, train.values, train.labels, n_classes, train.groups, plan.cv_folds);
    auto model = train_model(cv.best_spec, train.values, train.labels, n_classes);
    model.classes = raw.class_names;
    model.feature_names = train.feature_names;
    Matrix scores = predict_scores(model, test.values);
    const auto predicted = argmax_rows(scores);

    EvalCell cell;
    cell.condition = plan.condition;
    cell.model = plan.models[m].kind;
    cell.seed = seed;
    const auto f1 = confusion_and_f1(test.labels, predicted, n_classes);
    cell.f1_macro = macro_f1_present(test.labels, predicted, n_classes);
    cell.f1_micro = f1.f1_micro;
    cell.confusion = f1.confusion;
    cell.auc = one_vs_all_auc(scores, test.labels);
    cell.selected_features = out.selection.selected.size();
    cell.spec = cv.best_spec.describe();

    out.cv.push_back(std::move(cv));
    out.models.push_back(std::move(model));
    out.test_scores.push_back(std::move(scores));
    out.cells.push_back(std::move(cell));
  }
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string slug(std::string_view text) {
  std::string out;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "condition" : out;
}

std::string model_slug(ModelKind kind) {
  switch (kind) {
    case ModelKind::RandomForest: return "rf";
    case ModelKind::GradientBoosting: return "gb";
    case ModelKind::SvmRbf: return "svm";
    case ModelKind::Mlp: return "mlp";
  }
  return "model";
}

std::string split_csv(const FeatureMatrix& raw, const SplitAssignment& split) {
  std::vector<std::string> side(raw.rows(), "test");
  for (const auto i : split.train_indices) side[i] = "train";
  std::string out = "sample_id,participant_id,side\n";
  for (std::size_t i = 0; i < raw.rows(); ++i) {
    out += detail::csv_field(raw.sample_ids[i]) + ',' + detail::csv_field(raw.groups[i]) + ',' + side[i] + '\n';
  }
  return out;
}

std::string cv_csv(const CvResult& cv, const std::vector<ModelSpec>& grid) {
  std::string out = "spec,mean_macro_f1,folds,selected\n";
  if (cv.fold_scores.empty()) {
    out += detail::csv_field(cv.best_spec.describe()) + ",,,true\n";
    return out;
  }
  for (std::size_t s = 0; s < grid.size(); ++s) {
    std::string folds;
    for (std::size_t f = 0; f < cv.fold_scores[s].size(); ++f) {
      if (f) folds += ' ';
      folds += detail::format_double(cv.fold_scores[s][f]);
    }
    out += detail::csv_field(grid[s].describe()) + ',' +
           detail::format_double(cv.mean_scores[s]) + ',' + folds + ',' + (s == cv.best_index ? "true" : "false") +
           '\n';
  }
  return out;
}

std::string predictions_csv(const FeatureMatrix& test, const Matrix& scores) {
  std::string out = "sample_id,participant_id,truth,predicted";
  for (const auto& c : test.class_names) out += ",score_" + detail::csv_field(c);
  out += '\n';
  const auto predicted = argmax_rows(scores);
  for (std::size_t i = 0; i < test.rows(); ++i) {
    out += detail::csv_field(test.sample_ids[i]) + ',' + detail::csv_field(test.groups[i]) + ',' +
           detail::csv_field(test.class_names[static_cast<std::size_t>(test.labels[i])]) + ',' +
           detail::csv_field(test.class_names[static_cast<std::size_t>(predicted[i])]);
    for (Eigen::Index c = 0; c < scores.cols(); ++c) out += ',' + detail::format_double(scores(static_cast<Eigen::Index>(i), c));
    out += '\n';
  }
  return out;
}

struct Job {
  LabelScheme task;
  std::size_t condition;
  std::uint64_t seed;
};

struct JobResult {
  std::vector<EvalCell> cells;
  std::vector<std::pair<std::string, std::string>> files;  // relative path, content
  std::vector<json> log;
  std::optional<std::string> failure;
};

}  // namespace

RunArtifacts run_pipeline(const PipelineConfig& config) {
  if (config.conditions.empty()) throw ConfigError("config has no conditions");
  if (config.models.empty()) throw ConfigError("config has no models");
  const auto started = Clock::now();

  const LexiconSet lexicons = config.lexicons.empty() ? LexiconSet{} : LexiconSet::load(config.lexicons);
  std::set<std::string> used;
  for (const auto& c : config.conditions) used.insert(c.sources.begin(), c.sources.end());
  std::map<std::string, CohortDataset> sources;
  std::vector<json> preamble;
  preamble.push_back({{"stage", "config"},
                      {"config_hash", config.config_hash},
                      {"seeds", config.seeds},
                      {"conditions", config.conditions.size()},
                      {"tasks", config.tasks.size()}});
  for (const auto& name : used) {
    const auto t0 = Clock::now();
    sources[name] = load_manifest(config.manifests.at(name));
    const auto ids = sources[name].participant_ids();
    preamble.push_back({{"stage", "load"},
                        {"source", name},
                        {"samples", sources[name].size()},
                        {"participants", std::set<std::string>(ids.begin(), ids.end()).size()},
                        {"elapsed_ms", elapsed_ms(t0)}});
  }

  std::vector<Job> jobs;
  for (const auto task : config.tasks) {
    for (std::size_t c = 0; c < config.conditions.size(); ++c) {
      for (const auto seed : config.seeds) jobs.push_back({task, c, seed});
    }
  }

  std::vector<JobResult> results(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto& cond = config.conditions[job.condition];
    auto& result = results[j];
    const std::string dir = to_string(job.task) + "/" + slug(cond.name) + "/seed-" + std::to_string(job.seed) + "/";
    const json tag = {{"task", to_string(job.task)}, {"condition", cond.name}, {"seed", job.seed}};
    auto record = [&](const std::string& stage, Clock::time_point t0, json extra) {
      json entry = tag;
      entry["stage"] = stage;
      entry["elapsed_ms"] = elapsed_ms(t0);
      for (auto& [k, v] : extra.items()) entry[k] = v;
      result.log.push_back(std::move(entry));
    };
    auto emit = [&](const std::string& name, std::string content) {
      const auto hash = detail::hash_hex(content);
      result.files.emplace_back(dir + name, std::move(content));
      return hash;
    };

    try {
      auto t0 = Clock::now();
      std::vector<const CohortDataset*> parts;
      for (const auto& s : cond.sources) parts.push_back(&sources.at(s));
      const auto merged = CohortDataset::merge(parts);
      record("merge", t0, {{"samples", merged.size()}});

      t0 = Clock::now();
      std::vector<std::string> groups;
      for (const auto& s : merged.samples()) groups.push_back(s.participant_id);
      const auto split = grouped_split(groups, config.split_ratio, job.seed);

      ExtractOptions options;
      options.labels = job.task;
      options.mmse_threshold = config.mmse_threshold;
      options.features.fk_printed_sign = config.fk_printed_sign;
      const auto raw = extract_matrix(merged, job_registry(merged, split.train_indices, lexicons), lexicons, options);
      const auto split_hash = emit("split.csv", split_csv(raw, split));
      record("split", t0, {{"train", split.train_indices.size()}, {"test", split.test_indices.size()}, {"hash", split_hash}});
      t0 = Clock::now();
      const auto features_hash = emit("features.csv", to_csv(raw));
      record("extract", t0, {{"features", raw.cols()}, {"hash", features_hash}});

      t0 = Clock::now();
      TrainingPlan plan;
      plan.alpha = config.alpha;
      plan.oversample = cond.oversample;
      plan.adasyn = config.adasyn;
      plan.models = config.models;
      plan.cv_folds = config.cv_folds;
      plan.condition = cond.name;
      const auto outcome = train_condition(raw, split, plan, job.seed);
      const auto selection_hash = emit("selection.csv", to_csv(outcome.selection));
      const auto train_hash = emit("train_matrix.csv", to_csv(outcome.train, &outcome.synthetic_flags));
      std::size_t synthetic = 0;
      for (const bool f : outcome.synthetic_flags) synthetic += f;
      record("train", t0,
             {{"selected", outcome.selection.selected.size()},
              {"synthetic_rows", synthetic},
              {"selection_hash", selection_hash},
              {"train_matrix_hash", train_hash}});

      for (std::size_t m = 0; m < outcome.models.size(); ++m) {
        const auto name = model_slug(outcome.models[m].spec.kind);
        const auto model_hash = emit("model_" + name + ".txt", save_model(outcome.models[m]));
        emit("cv_" + name + ".csv", cv_csv(outcome.cv[m], config.models[m].specs));
        const auto pred_hash = emit("predictions_" + name + ".csv", predictions_csv(outcome.test, outcome.test_scores[m]));
        result.log.push_back(json{{"task", to_string(job.task)},
                                  {"condition", cond.name},
                                  {"seed", job.seed},
                                  {"stage", "evaluate"},
                                  {"model", to_string(outcome.models[m].spec.kind)},
                                  {"spec", outcome.cells[m].spec},
                                  {"f1_macro", outcome.cells[m].f1_macro},
                                  {"f1_micro", outcome.cells[m].f1_micro},
                                  {"model_hash", model_hash},
                                  {"predictions_hash", pred_hash}});
      }
      result.cells = outcome.cells;
    } catch (const std::exception& e) {
      detail::logger().error("{} / {} / seed {}: {}", to_string(job.task), cond.name, job.seed, e.what());
      result.failure = e.what();
      json entry = tag;
      entry["stage"] = "failed";
      entry["error"] = e.what();
      result.log.push_back(std::move(entry));
    }
  });

  RunArtifacts artifacts;
  artifacts.output = config.output;
  auto write = [&](const std::string& rel, const std::string& content) {
    detail::write_file(config.output / rel, content);
    artifacts.files.push_back(rel);
  };

  std::vector<json> log = preamble;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (const auto& [rel, content] : results[j].files) write(rel, content);
    log.insert(log.end(), results[j].log.begin(), results[j].log.end());
    if (results[j].failure) {
      artifacts.failures.push_back(to_string(jobs[j].task) + "/" + config.conditions[jobs[j].condition].name + "/" +
                                   std::to_string(jobs[j].seed) + ": " + *results[j].failure);
    }
  }

  std::string combined;
  for (const auto task : config.tasks) {
    EvalReport report;
    report.task = to_string(task);
    report.class_names = task == LabelScheme::Binary ? std::vector<std::string>{"Control", "AD"}
                                                     : std::vector<std::string>{"Control", "Mild", "Moderate"};
    for (const auto& c : config.conditions) report.conditions.push_back(c.name);
    for (const auto& m : config.models) report.models.push_back(m.kind);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].task == task) report.cells.insert(report.cells.end(), results[j].cells.begin(), results[j].cells.end());
    }
    if (report.cells.empty()) {
      detail::logger().error("no results for the {} task; skipping its report", report.task);
      continue;
    }
    for (const auto& table : render_report(report, ReportFormat::Markdown)) {
      write("report_" + table.name + ".md", table.content);
      combined += table.content + "\n";
    }
    for (const auto& table : render_report(report, ReportFormat::Csv)) write("report_" + table.name + ".csv", table.content);
    write("cells_" + report.task + ".csv", render_cells_csv(report));
    artifacts.reports.push_back(std::move(report));
  }
  if (!combined.empty()) write("report.md", combined);

  log.push_back({{"stage", "done"},
                 {"jobs", jobs.size()},
                 {"failed", artifacts.failures.size()},
                 {"elapsed_ms", elapsed_ms(started)}});
  std::string lines;
  for (const auto& entry : log) lines += entry.dump() + "\n";
  write("run_log.jsonl", lines);
  return artifacts;
}

}  // namespace cohort
