#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cohort/learners/spec.hpp"

namespace cohort {

/// One evaluated (condition, model, seed) triple.
struct EvalCell {
  std::string condition;
  ModelKind model = ModelKind::RandomForest;
  std::uint64_t seed = 0;
  double f1_macro = 0.0;
  double f1_micro = 0.0;
  /// One-vs-all AUC per class (NaN when undefined on the test split).
  std::vector<double> auc;
  std::vector<std::vector<long>> confusion;
  std::size_t selected_features = 0;
  std::string spec;
};

struct EvalReport {
  /// "binary" or "trinary".
  std::string task;
  std::vector<std::string> class_names;
  /// Row order of the tables.
  std::vector<std::string> conditions;
  /// Column-group order of the tables.
  std::vector<ModelKind> models;
  std::vector<EvalCell> cells;
};

enum class ReportFormat { Csv, Markdown };

struct RenderedTable {
  /// File-name friendly identifier, e.g. "binary_f1".
  std::string name;
  std::string content;
};

/// "DB only", "DB + WLS", "DB + WLS (oversampled)", ...
std::string condition_name(const std::vector<std::string>& sources, bool oversampled);

/// Display name of a model column group (Random Forest, Gradient Boosting, SVM, DNN).
std::string model_display_name(ModelKind kind);

/// Classes whose AUC is tabulated: the positive (last) class for two classes,
/// otherwise every class but the first, hardest first (reverse label order).
std::vector<std::size_t> reported_auc_classes(const EvalReport& report);

/// Two tables per report: F1 (macro and micro per model, as percentages with
/// the three highest macro cells marked in Markdown) and AUC. Cells average
/// over seeds, shown as "mean ± sd" when there is more than one. A condition
/// and model without results renders as "—" and logs a warning. Throws
/// DataError for a report without cells.
std::vector<RenderedTable> render_report(const EvalReport& report, ReportFormat format);

/// Per-cell CSV with one line per (condition, model, seed).
std::string render_cells_csv(const EvalReport& report);

/// Inverse of render_cells_csv for a single task; conditions and models keep
/// their order of first appearance. Throws ParseError on malformed input.
EvalReport parse_cells_csv(std::string_view text);

}  // namespace cohort
