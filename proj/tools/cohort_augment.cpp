#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cohort/common/error.hpp"
#include "cohort/corpus/manifest.hpp"
#include "cohort/corpus/synthetic.hpp"
#include "cohort/features/extract.hpp"
#include "cohort/features/feature_matrix.hpp"
#include "cohort/features/lexicon.hpp"
#include "cohort/learners/cv.hpp"
#include "cohort/learners/model.hpp"
#include "cohort/metrics/report.hpp"
#include "cohort/metrics/scores.hpp"
#include "cohort/pipeline/pipeline.hpp"
#include "cohort/resample/adasyn.hpp"
#include "cohort/stats/anova.hpp"

namespace fs = std::filesystem;
using namespace cohort;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// "-" or an empty path means standard output.
void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << content;
  if (!out) throw IoError("failed writing " + p.string());
}

LabelScheme parse_task(const std::string& text) {
  if (text == "binary") return LabelScheme::Binary;
  if (text == "trinary") return LabelScheme::Trinary;
  throw ConfigError("task must be binary or trinary");
}

void apply_params(Hyperparameters& params, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("--param expects name=value, got '" + a + "'");
    set_hyperparameter(params, a.substr(0, eq), std::stod(a.substr(eq + 1)));
  }
}

std::vector<ModelSpec> expand_grid(const ModelSpec& base, const std::vector<std::string>& axes) {
  std::vector<ModelSpec> specs{base};
  for (const auto& axis : axes) {
    const auto eq = axis.find('=');
    if (eq == std::string::npos) throw ConfigError("--grid expects name=v1,v2,..., got '" + axis + "'");
    const auto name = axis.substr(0, eq);
    std::vector<ModelSpec> next;
    std::stringstream values(axis.substr(eq + 1));
    std::string v;
    while (std::getline(values, v, ',')) {
      for (auto s : specs) {
        set_hyperparameter(s.params, name, std::stod(v));
        next.push_back(s);
      }
    }
    if (next.empty()) throw ConfigError("--grid axis '" + name + "' has no values");
    specs = std::move(next);
  }
  return specs;
}

// Reorders/validates columns against the model and maps labels onto its classes.
FeatureMatrix align_to_model(const FeatureMatrix& m, const TrainedModel& model) {
  FeatureMatrix out = model.feature_names.empty() ? m : m.select_columns(model.feature_names);
  if (static_cast<int>(out.cols()) != model.n_features) {
    throw DataError("feature file has " + std::to_string(out.cols()) + " columns, model expects " +
                    std::to_string(model.n_features));
  }
  for (auto& label : out.labels) {
    const auto& name = m.class_names[static_cast<std::size_t>(label)];
    const auto it = std::find(model.classes.begin(), model.classes.end(), name);
    if (it == model.classes.end()) throw DataError("label '" + name + "' is not a class of the model");
    label = static_cast<int>(it - model.classes.begin());
  }
  out.class_names = model.classes;
  return out;
}

std::string sample_summary(const CohortDataset& d) {
  std::string out = "participant_id,sample_id,source,diagnosis,mmse,utterances,words,trees\n";
  for (const auto& s : d.samples()) {
    out += s.participant_id + ',' + s.sample_id + ',' + std::string(to_string(s.source)) + ',' +
           std::string(to_string(s.diagnosis)) + ',' + (s.mmse ? std::to_string(*s.mmse) : "") + ',' +
           std::to_string(s.utterances.size()) + ',' + std::to_string(s.word_count()) + ',' +
           (s.has_trees() ? "yes" : "no") + '\n';
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohort augmentation toolkit: transcripts to features, selection, oversampling, learners and reports."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("cohort-augment 0.3.0"));

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic cohort (CHAT, trees, manifest.json)");
  SyntheticCohortSpec synth_spec;
  std::string synth_out;
  std::uint64_t seed = 0;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--control", synth_spec.control, "Control samples")->check(CLI::NonNegativeNumber);
  synth->add_option("--impaired", synth_spec.impaired, "Impaired samples")->check(CLI::NonNegativeNumber);
  synth->add_option("--effect", synth_spec.effect, "Style shift of the impaired group, -1..1");
  synth->add_option("--id-prefix", synth_spec.id_prefix, "Prefix for participant ids");
  synth->add_option("--max-visits", synth_spec.max_visits, "Samples per participant at most")->check(CLI::PositiveNumber);
  synth->add_option("--min-utterances", synth_spec.min_utterances, "Utterances per transcript at least");
  synth->add_option("--max-utterances", synth_spec.max_utterances, "Utterances per transcript at most");
  synth->add_option("--seed", seed, "Random seed");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load and validate a manifest; print one line per sample");
  std::string manifest_path, ingest_out;
  ingest->add_option("--manifest", manifest_path, "Manifest JSON")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "Summary CSV (default stdout)");

  // extract
  auto* extract = app.add_subcommand("extract", "Extract the feature matrix of a manifest");
  std::string extract_manifest, extract_out, lexicon_path, task = "binary";
  int mmse_threshold = 10;
  bool printed_sign = false;
  extract->add_option("--manifest", extract_manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
  extract->add_option("--out", extract_out, "Feature CSV (default stdout)");
  extract->add_option("--lexicons", lexicon_path, "Lexicon file")->check(CLI::ExistingFile);
  extract->add_option("--task", task, "binary or trinary")->check(CLI::IsMember({"binary", "trinary"}));
  extract->add_option("--mmse-threshold", mmse_threshold, "MMSE at or below which AD is Moderate")
      ->check(CLI::Range(0, 30));
  extract->add_flag("--fk-printed-sign", printed_sign, "Add 15.59 in the grade formula instead of subtracting");

  // select
  auto* select = app.add_subcommand("select", "One-way ANOVA feature selection (p <= alpha)");
  std::string select_features_path, select_out, select_matrix_out;
  double alpha = 0.005;
  select->add_option("--features", select_features_path, "Feature CSV")->required()->check(CLI::ExistingFile);
  select->add_option("--alpha", alpha, "Inclusive p-value threshold")->check(CLI::Range(0.0, 1.0));
  select->add_option("--out", select_out, "Selection report CSV (default stdout)");
  select->add_option("--matrix-out", select_matrix_out,
                     "Also write the selected columns, mean-imputed and standardised on this file's rows");

  // resample
  auto* resample = app.add_subcommand("resample", "ADASYN oversampling of a feature CSV");
  std::string resample_in, resample_out;
  AdasynParams adasyn_params;
  resample->add_option("--features", resample_in, "Feature CSV without missing values")->required()->check(CLI::ExistingFile);
  resample->add_option("--out", resample_out, "Resampled CSV with a synthetic_flag column (default stdout)");
  resample->add_option("--beta", adasyn_params.beta, "Fraction of the class gap to fill")->check(CLI::NonNegativeNumber);
  resample->add_option("--k", adasyn_params.k, "Neighbours")->check(CLI::PositiveNumber);
  resample->add_option("--seed", seed, "Random seed");

  // train
  auto* train = app.add_subcommand("train", "Train one learner (grid search when --grid is given)");
  std::string train_in, train_out, model_kind = "rf", groups_note;
  std::vector<std::string> params, grid_axes;
  int folds = 10;
  train->add_option("--features", train_in, "Feature CSV without missing values")->required()->check(CLI::ExistingFile);
  train->add_option("--model", model_kind, "rf, gb, svm or mlp");
  train->add_option("--param", params, "Hyperparameter name=value (repeatable)");
  train->add_option("--grid", grid_axes, "Grid axis name=v1,v2,... (repeatable)");
  train->add_option("--folds", folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
  train->add_option("--seed", seed, "Random seed");
  train->add_option("--out", train_out, "Model dump")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Score a feature CSV with a trained model");
  std::string eval_model, eval_in, eval_out;
  eval->add_option("--model", eval_model, "Model dump")->required()->check(CLI::ExistingFile);
  eval->add_option("--features", eval_in, "Feature CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eval_out, "Predictions CSV (default stdout)");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run the full experiment grid of a config file");
  std::string config_path, pipeline_out;
  std::vector<std::uint64_t> seeds;
  pipeline->add_option("--config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  pipeline->add_option("--out", pipeline_out, "Output directory (overrides the config)");
  pipeline->add_option("--seed", seeds, "Split seed(s) (override the config)");

  // report
  auto* report = app.add_subcommand("report", "Render result tables from a cells CSV");
  std::string cells_in, report_out, format = "markdown";
  report->add_option("--cells", cells_in, "cells_<task>.csv from a pipeline run")->required()->check(CLI::ExistingFile);
  report->add_option("--format", format, "markdown or csv")->check(CLI::IsMember({"markdown", "csv"}));
  report->add_option("--out", report_out, "Output directory (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth) {
      const auto dataset = generate_synthetic_cohort(synth_spec, seed);
      const auto manifest = write_cohort_files(dataset, synth_out);
      std::cerr << "wrote " << dataset.size() << " samples; manifest " << manifest.string() << "\n";
    } else if (*ingest) {
      const auto dataset = load_manifest(fs::path(manifest_path));
      write_text(ingest_out, sample_summary(dataset));
      const auto ids = dataset.participant_ids();
      std::cerr << dataset.size() << " samples from " << std::set<std::string>(ids.begin(), ids.end()).size()
                << " participants\n";
    } else if (*extract) {
      const auto dataset = load_manifest(fs::path(extract_manifest));
      const LexiconSet lexicons = lexicon_path.empty() ? LexiconSet{} : LexiconSet::load(lexicon_path);
      std::vector<std::size_t> all(dataset.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      ExtractOptions options;
      options.labels = parse_task(task);
      options.mmse_threshold = mmse_threshold;
      options.features.fk_printed_sign = printed_sign;
      const auto matrix = extract_matrix(dataset, job_registry(dataset, all, lexicons), lexicons, options);
      write_text(extract_out, to_csv(matrix));
    } else if (*select) {
      const auto matrix = from_csv(read_text(select_features_path));
      const auto selection = select_features(matrix, alpha);
      write_text(select_out, to_csv(selection));
      std::cerr << selection.selected.size() << " of " << matrix.cols() << " features selected at alpha "
                << alpha << "\n";
      if (!select_matrix_out.empty()) {
        std::vector<std::size_t> rows(matrix.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        FeatureMatrix reduced = matrix.select_columns(selection.selected);
        ColumnImputer::fit(reduced.values, rows).apply(reduced.values);
        Standardizer::fit(reduced.values).apply(reduced.values);
        write_text(select_matrix_out, to_csv(reduced));
      }
    } else if (*resample) {
      const auto matrix = from_csv(read_text(resample_in));
      adasyn_params.seed = seed;
      const auto outcome = matrix.class_names.size() == 2 ? adasyn(matrix.values, matrix.labels, adasyn_params)
                                                          : adasyn_one_vs_rest(matrix.values, matrix.labels, adasyn_params);
      FeatureMatrix out;
      out.feature_names = matrix.feature_names;
      out.class_names = matrix.class_names;
      out.values = outcome.features;
      out.labels = outcome.labels;
      std::map<std::size_t, int> counter;
      for (std::size_t i = 0; i < outcome.source_rows.size(); ++i) {
        const auto src = outcome.source_rows[i];
        out.groups.push_back(matrix.groups[src]);
        out.sample_ids.push_back(outcome.synthetic_flags[i]
                                     ? matrix.sample_ids[src] + "#syn" + std::to_string(++counter[src])
                                     : matrix.sample_ids[src]);
      }
      write_text(resample_out, to_csv(out, &outcome.synthetic_flags));
      std::cerr << outcome.synthetic_count() << " synthetic rows added\n";
    } else if (*train) {
      const auto matrix = from_csv(read_text(train_in));
      auto base = ModelSpec::defaults(parse_model_kind(model_kind), seed);
      apply_params(base.params, params);
      const auto grid = expand_grid(base, grid_axes);
      const int k = static_cast<int>(matrix.class_names.size());
      const auto cv = grid_search_cv(grid, matrix.values, matrix.labels, k, matrix.groups, grid.size() > 1 ? folds : 2);
      if (!cv.mean_scores.empty()) {
        for (std::size_t s = 0; s < grid.size(); ++s) {
          std::cerr << grid[s].describe() << "  mean macro-F1 " << cv.mean_scores[s]
                    << (s == cv.best_index ? "  <- best" : "") << "\n";
        }
      }
      auto model = train_model(cv.best_spec, matrix.values, matrix.labels, k);
      model.classes = matrix.class_names;
      model.feature_names = matrix.feature_names;
      write_text(train_out, save_model(model));
    } else if (*eval) {
      const auto model = load_model(read_text(eval_model));
      const auto matrix = align_to_model(from_csv(read_text(eval_in)), model);
      const Matrix scores = predict_scores(model, matrix.values);
      const auto predicted = argmax_rows(scores);
      std::string out = "sample_id,participant_id,truth,predicted";
      for (const auto& c : model.classes) out += ",score_" + c;
      out += '\n';
      for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out += matrix.sample_ids[i] + ',' + matrix.groups[i] + ',' + model.classes[static_cast<std::size_t>(matrix.labels[i])] +
               ',' + model.classes[static_cast<std::size_t>(predicted[i])];
        for (Eigen::Index c = 0; c < scores.cols(); ++c) {
          std::ostringstream v;
          v.precision(17);
          v << scores(static_cast<Eigen::Index>(i), c);
          out += ',' + v.str();
        }
        out += '\n';
      }
      write_text(eval_out, out);
      const auto f1 = confusion_and_f1(matrix.labels, predicted, model.n_classes());
      std::cerr << "F1 macro " << macro_f1_present(matrix.labels, predicted, model.n_classes()) << ", F1 micro "
                << f1.f1_micro;
      const auto auc = one_vs_all_auc(scores, matrix.labels);
      for (std::size_t c = 0; c < auc.size(); ++c) {
        if (!std::isnan(auc[c])) std::cerr << ", AUC " << model.classes[c] << " " << auc[c];
      }
      std::cerr << "\n";
    } else if (*pipeline) {
      auto config = load_pipeline_config(config_path);
      if (!pipeline_out.empty()) config.output = pipeline_out;
      if (!seeds.empty()) config.seeds = seeds;
      const auto artifacts = run_pipeline(config);
      std::cerr << artifacts.files.size() << " files written to " << artifacts.output.string() << "\n";
      for (const auto& f : artifacts.failures) std::cerr << "failed: " << f << "\n";
      if (artifacts.reports.empty()) throw DataError("every job failed; no report produced");
    } else if (*report) {
      const auto parsed = parse_cells_csv(read_text(cells_in));
      const auto tables = render_report(parsed, format == "csv" ? ReportFormat::Csv : ReportFormat::Markdown);
      for (const auto& t : tables) {
        if (report_out.empty()) {
          std::cout << t.content << "\n";
        } else {
          write_text((fs::path(report_out) / (t.name + (format == "csv" ? ".csv" : ".md"))).string(), t.content);
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
