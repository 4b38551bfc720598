#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cohort/corpus/types.hpp"
#include "cohort/features/extract.hpp"
#include "cohort/features/feature_matrix.hpp"
#include "cohort/features/lexicon.hpp"
#include "cohort/learners/cv.hpp"
#include "cohort/learners/model.hpp"
#include "cohort/metrics/report.hpp"
#include "cohort/metrics/split.hpp"
#include "cohort/resample/adasyn.hpp"
#include "cohort/stats/anova.hpp"

namespace cohort {

struct ConditionSpec {
  std::string name;
  /// Keys into PipelineConfig::manifests, merged in this order.
  std::vector<std::string> sources;
  bool oversample = false;
};

/// All grid entries of one model kind; grid search picks one of them.
struct ModelGrid {
  ModelKind kind = ModelKind::RandomForest;
  std::vector<ModelSpec> specs;
};

struct PipelineConfig {
  std::map<std::string, std::filesystem::path> manifests;
  std::vector<LabelScheme> tasks{LabelScheme::Binary};
  std::vector<ConditionSpec> conditions;
  double alpha = 0.005;
  AdasynParams adasyn;
  std::vector<ModelGrid> models;
  double split_ratio = 0.8;
  std::vector<std::uint64_t> seeds{0};
  int cv_folds = 10;
  std::filesystem::path lexicons;
  std::filesystem::path output;
  int mmse_threshold = 10;
  bool fk_printed_sign = false;
  /// Recorded in the run log.
  std::string config_hash;
};

/// Parses the JSON configuration; relative paths resolve against base_dir.
/// Throws ConfigError for unknown keys, missing required fields, values out of
/// range, conditions naming unknown sources and manifests that do not exist.
PipelineConfig parse_pipeline_config(std::string_view json_text, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// RF, GB, SVM and MLP with their default hyperparameters.
std::vector<ModelGrid> default_model_grids();

std::string to_string(LabelScheme scheme);

/// Training-side state fitted for one (task, condition, seed) job.
struct ConditionOutcome {
  std::vector<std::string> registry;
  ColumnImputer imputer;
  SelectionReport selection;
  Standardizer standardizer;
  /// Training rows after selection, standardisation and optional ADASYN.
  FeatureMatrix train;
  std::vector<bool> synthetic_flags;
  std::vector<CvResult> cv;
  std::vector<TrainedModel> models;
  /// Test rows after the fitted transforms.
  FeatureMatrix test;
  std::vector<Matrix> test_scores;
  std::vector<EvalCell> cells;
};

struct TrainingPlan {
  double alpha = 0.005;
  bool oversample = false;
  AdasynParams adasyn;
  std::vector<ModelGrid> models;
  int cv_folds = 10;
  std::string condition;
};

/// Every training-side step of one job on an already extracted feature matrix:
/// imputation, ANOVA selection, standardisation and ADASYN fitted on the
/// training rows, then grid search, fitting and evaluation on the test rows.
/// Throws DataError when selection keeps no feature.
ConditionOutcome train_condition(const FeatureMatrix& raw, const SplitAssignment& split, const TrainingPlan& plan,
                                 std::uint64_t seed);

/// Feature registry for a job: the standard features plus the productions
/// observed in the training rows.
FeatureRegistry job_registry(const CohortDataset& dataset, std::span<const std::size_t> train_rows,
                             const LexiconSet& lexicons);

struct RunArtifacts {
  std::filesystem::path output;
  std::vector<EvalReport> reports;
  /// Files written, relative to `output`, in write order.
  std::vector<std::string> files;
  /// "task/condition/seed: message" for each aborted job.
  std::vector<std::string> failures;
};

/// Runs every (task, condition, seed) job and writes per-job artifacts,
/// report tables and a JSON-lines run log into config.output. A job that
/// throws is logged and skipped; the others proceed.
RunArtifacts run_pipeline(const PipelineConfig& config);

}  // namespace cohort
