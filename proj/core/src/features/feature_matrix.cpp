#include "cohort/features/feature_matrix.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "cohort/common/error.hpp"
#include "common/csv.hpp"

namespace cohort {

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - feature_names.begin());
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.feature_names = feature_names;
  out.class_names = class_names;
  out.values.resize(static_cast<Eigen::Index>(indices.size()), values.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto src = indices[r];
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(src));
    out.labels.push_back(labels[src]);
    out.groups.push_back(groups[src]);
    out.sample_ids.push_back(sample_ids[src]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::string> names) const {
  FeatureMatrix out;
  out.labels = labels;
  out.class_names = class_names;
  out.groups = groups;
  out.sample_ids = sample_ids;
  out.values.resize(values.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto index = column_index(names[c]);
    if (!index) throw ConfigError("feature matrix has no column '" + names[c] + "'");
    out.values.col(static_cast<Eigen::Index>(c)) = values.col(static_cast<Eigen::Index>(*index));
    out.feature_names.push_back(names[c]);
  }
  return out;
}

void FeatureMatrix::check_shape() const {
  const auto n = rows();
  if (labels.size() != n || groups.size() != n || sample_ids.size() != n) {
    throw ValidationError("feature matrix metadata does not match its row count");
  }
  if (feature_names.size() != cols()) {
    throw ValidationError("feature matrix names do not match its column count");
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
      throw ValidationError("feature matrix label outside its class list");
    }
  }
}

std::vector<std::string> canonical_class_order(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const auto within = [&](std::initializer_list<std::string_view> order) {
    return std::all_of(names.begin(), names.end(), [&](const std::string& n) {
      return std::find(order.begin(), order.end(), n) != order.end();
    });
  };
  if (within({"Control", "AD"})) return {"Control", "AD"};
  if (within({"Control", "Mild", "Moderate"})) return {"Control", "Mild", "Moderate"};
  return names;
}

std::string to_csv(const FeatureMatrix& matrix, const std::vector<bool>* synthetic_flags) {
  matrix.check_shape();
  std::string out = "participant_id,sample_id,label";
  for (const auto& name : matrix.feature_names) out += "," + detail::csv_field(name);
  if (synthetic_flags) out += ",synthetic_flag";
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out += detail::csv_field(matrix.groups[r]);
    out += ',';
    out += detail::csv_field(matrix.sample_ids[r]);
    out += ',';
    out += detail::csv_field(matrix.class_names[static_cast<std::size_t>(matrix.labels[r])]);
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      out += ',';
      out += detail::format_double(matrix.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    if (synthetic_flags) out += (*synthetic_flags)[r] ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

FeatureMatrix from_csv(std::string_view text, std::vector<bool>* synthetic_flags) {
  const auto records = detail::parse_csv(text);
  if (records.empty()) throw ParseError("feature CSV is empty", 1);
  const auto& header = records.front().fields;
  if (header.size() < 3 || header[0] != "participant_id" || header[1] != "sample_id" || header[2] != "label") {
    throw ParseError("feature CSV header must start with participant_id,sample_id,label", 1);
  }
  const bool has_flag = header.back() == "synthetic_flag";
  const std::size_t feature_end = header.size() - (has_flag ? 1 : 0);

  FeatureMatrix m;
  m.feature_names.assign(header.begin() + 3, header.begin() + static_cast<std::ptrdiff_t>(feature_end));
  const std::size_t n = records.size() - 1;
  m.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m.feature_names.size()));
  std::vector<std::string> raw_labels;
  if (synthetic_flags) synthetic_flags->clear();

  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = records[r + 1];
    if (rec.fields.size() != header.size()) {
      throw ParseError("feature CSV line " + std::to_string(rec.line) + " has " +
                           std::to_string(rec.fields.size()) + " fields, expected " +
                           std::to_string(header.size()),
                       rec.line);
    }
    m.groups.push_back(rec.fields[0]);
    m.sample_ids.push_back(rec.fields[1]);
    raw_labels.push_back(rec.fields[2]);
    for (std::size_t c = 3; c < feature_end; ++c) {
      const auto& cell = rec.fields[c];
      double value = std::numeric_limits<double>::quiet_NaN();
      if (!cell.empty()) {
        const auto parsed = detail::parse_double(cell);
        if (!parsed) {
          throw ParseError("feature CSV line " + std::to_string(rec.line) + ": '" + cell + "' is not a number",
                           rec.line);
        }
        value = *parsed;
      }
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 3)) = value;
    }
    if (has_flag && synthetic_flags) synthetic_flags->push_back(rec.fields.back() == "1");
  }
  m.class_names = canonical_class_order(raw_labels);
  for (const auto& l : raw_labels) {
    const auto it = std::find(m.class_names.begin(), m.class_names.end(), l);
    m.labels.push_back(static_cast<int>(it - m.class_names.begin()));
  }
  return m;
}

}  // namespace cohort
