#include "cohort/learners/spec.hpp"

#include <cmath>
#include <sstream>

#include "cohort/common/error.hpp"
#include "common/text_util.hpp"

namespace cohort {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::RandomForest: return "RandomForest";
    case ModelKind::GradientBoosting: return "GradientBoosting";
    case ModelKind::SvmRbf: return "SvmRbf";
    case ModelKind::Mlp: return "Mlp";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  const auto t = detail::to_lower(text);
  if (t == "randomforest" || t == "rf") return ModelKind::RandomForest;
  if (t == "gradientboosting" || t == "gb") return ModelKind::GradientBoosting;
  if (t == "svmrbf" || t == "svm") return ModelKind::SvmRbf;
  if (t == "mlp") return ModelKind::Mlp;
  throw ConfigError("unknown model kind '" + std::string(text) + "'");
}

ModelSpec ModelSpec::defaults(ModelKind kind, std::uint64_t seed) {
  ModelSpec s;
  s.kind = kind;
  s.seed = seed;
  if (kind == ModelKind::RandomForest) s.params.max_depth = 0;
  return s;
}

std::string ModelSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind) << '(';
  const auto& p = params;
  switch (kind) {
    case ModelKind::RandomForest:
      out << "trees=" << p.trees << ", depth=" << p.max_depth << ", max_features=" << p.max_features;
      break;
    case ModelKind::GradientBoosting:
      out << "estimators=" << p.estimators << ", depth=" << p.max_depth << ", learning_rate=" << p.learning_rate;
      break;
    case ModelKind::SvmRbf:
      out << "gamma=" << p.gamma << ", c=" << p.c;
      break;
    case ModelKind::Mlp:
      out << "layers=" << p.layers << ", units=" << p.units << ", dropout=" << p.dropout
          << ", learning_rate=" << p.learning_rate << ", epochs=" << p.epochs << ", batch_size=" << p.batch_size;
      break;
  }
  out << ", seed=" << seed << ')';
  return out.str();
}

namespace {

int as_int(std::string_view name, double value, int lo) {
  if (!(std::isfinite(value) && value == std::floor(value) && value >= lo && value <= 1e9)) {
    throw ConfigError("hyperparameter '" + std::string(name) + "' must be an integer >= " + std::to_string(lo));
  }
  return static_cast<int>(value);
}

double positive(std::string_view name, double value) {
  if (!(std::isfinite(value) && value > 0)) {
    throw ConfigError("hyperparameter '" + std::string(name) + "' must be positive");
  }
  return value;
}

}  // namespace

void set_hyperparameter(Hyperparameters& p, std::string_view name, double value) {
  if (name == "trees") p.trees = as_int(name, value, 1);
  else if (name == "max_features") p.max_features = as_int(name, value, 0);
  else if (name == "estimators") p.estimators = as_int(name, value, 0);
  else if (name == "depth" || name == "max_depth") p.max_depth = as_int(name, value, 0);
  else if (name == "learning_rate") p.learning_rate = positive(name, value);
  else if (name == "gamma") p.gamma = positive(name, value);
  else if (name == "c" || name == "C") p.c = positive(name, value);
  else if (name == "tolerance") p.tolerance = positive(name, value);
  else if (name == "max_iterations") p.max_iterations = as_int(name, value, 0);
  else if (name == "layers") p.layers = as_int(name, value, 0);
  else if (name == "units") p.units = as_int(name, value, 1);
  else if (name == "dropout") {
    if (!(value >= 0.0 && value < 1.0)) throw ConfigError("hyperparameter 'dropout' must lie in [0, 1)");
    p.dropout = value;
  } else if (name == "epochs") p.epochs = as_int(name, value, 0);
  else if (name == "batch_size") p.batch_size = as_int(name, value, 1);
  else throw ConfigError("unknown hyperparameter '" + std::string(name) + "'");
}

void validate(const ModelSpec& spec) {
  const auto& p = spec.params;
  auto fail = [](const std::string& what) { throw ConfigError("invalid model spec: " + what); };
  switch (spec.kind) {
    case ModelKind::RandomForest:
      if (p.trees < 1) fail("trees must be >= 1");
      if (p.max_features < 0 || p.max_depth < 0) fail("max_features and depth must be >= 0");
      break;
    case ModelKind::GradientBoosting:
      if (p.estimators < 0) fail("estimators must be >= 0");
      if (p.max_depth < 1) fail("depth must be >= 1");
      if (!(p.learning_rate > 0)) fail("learning_rate must be positive");
      break;
    case ModelKind::SvmRbf:
      if (!(p.gamma > 0) || !(p.c > 0) || !(p.tolerance > 0)) fail("gamma, c and tolerance must be positive");
      if (p.max_iterations < 0) fail("max_iterations must be >= 0");
      break;
    case ModelKind::Mlp:
      if (p.layers < 0 || p.units < 1 || p.epochs < 0 || p.batch_size < 1) fail("layers/units/epochs/batch_size out of range");
      if (!(p.dropout >= 0.0 && p.dropout < 1.0)) fail("dropout must lie in [0, 1)");
      if (!(p.learning_rate > 0)) fail("learning_rate must be positive");
      break;
  }
}

}  // namespace cohort
