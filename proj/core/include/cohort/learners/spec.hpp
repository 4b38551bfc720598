#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cohort {

enum class ModelKind { RandomForest, GradientBoosting, SvmRbf, Mlp };

std::string to_string(ModelKind kind);
/// Accepts the enum names and the short forms rf, gb, svm, mlp (case-insensitive).
ModelKind parse_model_kind(std::string_view text);

/// Union of the hyperparameters of every kind; each kind reads its own subset.
struct Hyperparameters {
  // Random forest
  int trees = 100;
  /// Candidate features per split; 0 means ceil(sqrt(d)).
  int max_features = 0;
  // Gradient boosting (max_depth 0 means unlimited, the forest default)
  int estimators = 1000;
  int max_depth = 5;
  double learning_rate = 0.1;
  // SVM
  double gamma = 0.001;
  double c = 1.0;
  double tolerance = 1e-3;
  long max_iterations = 0;  ///< 0 means max(10'000'000, 100 n)
  // MLP (learning_rate shared with boosting)
  int layers = 4;
  int units = 512;
  double dropout = 0.1;
  int epochs = 100;
  int batch_size = 100;

  bool operator==(const Hyperparameters&) const = default;
};

struct ModelSpec {
  ModelKind kind = ModelKind::RandomForest;
  Hyperparameters params;
  std::uint64_t seed = 0;

  /// Defaults for a kind: the forest grows unbounded trees, the rest use the
  /// values above.
  static ModelSpec defaults(ModelKind kind, std::uint64_t seed = 0);

  /// Short human-readable form listing only the fields the kind uses.
  std::string describe() const;

  bool operator==(const ModelSpec&) const = default;
};

/// Sets a hyperparameter by name (trees, max_features, estimators, depth,
/// learning_rate, gamma, c, tolerance, max_iterations, layers, units, dropout,
/// epochs, batch_size). Throws ConfigError for unknown names or values out of
/// range for that field.
void set_hyperparameter(Hyperparameters& params, std::string_view name, double value);

/// Throws ConfigError when a field the kind uses is out of range.
void validate(const ModelSpec& spec);

}  // namespace cohort
