#include "cohort/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "cohort/common/error.hpp"
#include "common/csv.hpp"
#include "common/log.hpp"

namespace cohort {

std::string condition_name(const std::vector<std::string>& sources, bool oversampled) {
  std::string name;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (i) name += " + ";
    name += sources[i];
  }
  if (sources.size() == 1) name += " only";
  if (oversampled) name += " (oversampled)";
  return name;
}

std::string model_display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::RandomForest: return "Random Forest";
    case ModelKind::GradientBoosting: return "Gradient Boosting";
    case ModelKind::SvmRbf: return "SVM";
    case ModelKind::Mlp: return "DNN";
  }
  return "?";
}

std::vector<std::size_t> reported_auc_classes(const EvalReport& report) {
  const auto k = report.class_names.size();
  if (k == 2) return {1};
  std::vector<std::size_t> out;
  for (std::size_t c = k; c-- > 1;) out.push_back(c);
  return out;
}

namespace {

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};

std::optional<Summary> summarise(const std::vector<double>& values) {
  std::vector<double> finite;
  for (const double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) return std::nullopt;
  Summary s;
  s.count = finite.size();
  for (const double v : finite) s.mean += v;
  s.mean /= static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (const double v : finite) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

std::string fixed(double v, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

std::string cell_text(const std::optional<Summary>& s, double scale, int digits) {
  if (!s) return "—";
  std::string text = fixed(s->mean * scale, digits);
  if (s->count > 1) text += " ± " + fixed(s->sd * scale, digits);
  return text;
}

class Grid {
 public:
  explicit Grid(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::vector<std::string>& row(std::size_t i) { return rows_[i]; }

  std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += detail::csv_field(fields[i]);
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  std::string markdown(const std::string& caption, const std::vector<std::string>& group_row) const {
    std::string out = "**" + caption + "**\n\n";
    auto line = [&](const std::vector<std::string>& fields) {
      out += '|';
      for (const auto& f : fields) out += ' ' + f + " |";
      out += '\n';
    };
    const auto& top = group_row.empty() ? header_ : group_row;
    line(top);
    out += '|';
    for (std::size_t i = 0; i < top.size(); ++i) out += i == 0 ? "---|" : "---:|";
    out += '\n';
    if (!group_row.empty()) line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string task_caption(const EvalReport& report) {
  std::string caption;
  for (std::size_t c = report.class_names.size(); c-- > 0;) {
    caption += report.class_names[c];
    if (c) caption += " vs ";
  }
  return caption;
}

}  // namespace

std::vector<RenderedTable> render_report(const EvalReport& report, ReportFormat format) {
  if (report.cells.empty()) throw DataError("cannot render an empty report");
  const bool markdown = format == ReportFormat::Markdown;
  const auto& conditions = report.conditions;
  const auto& models = report.models;

  auto cells_for = [&](const std::string& condition, ModelKind model) {
    std::vector<const EvalCell*> out;
    for (const auto& c : report.cells) {
      if (c.condition == condition && c.model == model) out.push_back(&c);
    }
    if (out.empty()) {
      detail::logger().warn("report has no result for condition '{}', model {}", condition, to_string(model));
    }
    return out;
  };

  // F1 table
  std::vector<std::string> f1_header{markdown ? "" : "condition"};
  std::vector<std::string> f1_groups{""};
  for (const auto m : models) {
    const auto name = model_display_name(m);
    if (markdown) {
      f1_header.insert(f1_header.end(), {"F1 (macro)", "F1 (micro)"});
      f1_groups.insert(f1_groups.end(), {name, ""});
    } else {
      f1_header.insert(f1_header.end(), {name + " F1 (macro)", name + " F1 (micro)"});
    }
  }
  Grid f1(f1_header);
  std::vector<std::tuple<double, std::size_t, std::size_t>> macro_means;
  for (std::size_t r = 0; r < conditions.size(); ++r) {
    std::vector<std::string> row{conditions[r]};
    for (std::size_t m = 0; m < models.size(); ++m) {
      std::vector<double> macro, micro;
      for (const auto* c : cells_for(conditions[r], models[m])) {
        macro.push_back(c->f1_macro);
        micro.push_back(c->f1_micro);
      }
      const auto ms = summarise(macro);
      row.push_back(cell_text(ms, 100.0, 2));
      row.push_back(cell_text(summarise(micro), 100.0, 2));
      if (ms) macro_means.emplace_back(ms->mean, r, 1 + 2 * m);
    }
    f1.add_row(std::move(row));
  }
  if (markdown) {
    std::stable_sort(macro_means.begin(), macro_means.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
    for (std::size_t i = 0; i < std::min<std::size_t>(3, macro_means.size()); ++i) {
      auto& text = f1.row(std::get<1>(macro_means[i]))[std::get<2>(macro_means[i])];
      text = "**" + text + "**";
    }
  }

  // AUC table
  const auto auc_classes = reported_auc_classes(report);
  const bool grouped = auc_classes.size() > 1;
  std::vector<std::string> auc_header{markdown ? "" : "condition"};
  std::vector<std::string> auc_groups{""};
  for (const auto m : models) {
    const auto name = model_display_name(m);
    for (std::size_t i = 0; i < auc_classes.size(); ++i) {
      const auto& cls = report.class_names[auc_classes[i]];
      if (!markdown) {
        auc_header.push_back(grouped ? name + " " + cls : name);
      } else if (grouped) {
        auc_header.push_back(cls);
        auc_groups.push_back(i == 0 ? name : "");
      } else {
        auc_header.push_back(name);
      }
    }
  }
  Grid auc(auc_header);
  for (const auto& condition : conditions) {
    std::vector<std::string> row{condition};
    for (const auto m : models) {
      const auto cells = cells_for(condition, m);
      for (const auto cls : auc_classes) {
        std::vector<double> values;
        for (const auto* c : cells) {
          if (cls < c->auc.size()) values.push_back(c->auc[cls]);
        }
        row.push_back(cell_text(summarise(values), 1.0, 2));
      }
    }
    auc.add_row(std::move(row));
  }

  const auto caption = task_caption(report);
  std::vector<RenderedTable> out;
  if (markdown) {
    out.push_back({report.task + "_f1",
                   f1.markdown(caption + ": F1 (%). The three highest F1 macro scores are shown in bold.", f1_groups)});
    std::string auc_caption = caption + ": AUC";
    if (grouped) {
      auc_caption += " (one-vs-all)";
    } else {
      auc_caption += " for the " + report.class_names[auc_classes.front()] + " class";
    }
    out.push_back({report.task + "_auc", auc.markdown(auc_caption, grouped ? auc_groups : std::vector<std::string>{})});
  } else {
    out.push_back({report.task + "_f1", f1.csv()});
    out.push_back({report.task + "_auc", auc.csv()});
  }
  return out;
}

std::string render_cells_csv(const EvalReport& report) {
  std::string out = "task,condition,model,seed,f1_macro,f1_micro,selected_features";
  for (const auto& name : report.class_names) out += ",auc_" + detail::csv_field(name);
  out += ",confusion,spec\n";
  for (const auto& c : report.cells) {
    out += report.task + ',' + detail::csv_field(c.condition) + ',' + to_string(c.model) + ',' + std::to_string(c.seed) +
           ',' + detail::format_double(c.f1_macro) + ',' + detail::format_double(c.f1_micro) + ',' +
           std::to_string(c.selected_features);
    for (std::size_t k = 0; k < report.class_names.size(); ++k) {
      out += ',' + (k < c.auc.size() ? detail::format_double(c.auc[k]) : std::string());
    }
    std::string confusion;
    for (std::size_t i = 0; i < c.confusion.size(); ++i) {
      if (i) confusion += ';';
      for (std::size_t j = 0; j < c.confusion[i].size(); ++j) {
        if (j) confusion += ' ';
        confusion += std::to_string(c.confusion[i][j]);
      }
    }
    out += ',' + confusion + ',' + detail::csv_field(c.spec) + '\n';
  }
  return out;
}

EvalReport parse_cells_csv(std::string_view text) {
  const auto records = detail::parse_csv(text);
  if (records.empty()) throw ParseError("cells CSV is empty", 1);
  const auto& header = records.front().fields;
  const std::vector<std::string> fixed_head{"task", "condition", "model", "seed", "f1_macro", "f1_micro",
                                            "selected_features"};
  if (header.size() < fixed_head.size() + 2 || !std::equal(fixed_head.begin(), fixed_head.end(), header.begin()) ||
      header[header.size() - 2] != "confusion" || header.back() != "spec") {
    throw ParseError("cells CSV header must start with task,condition,model,... and end with confusion,spec", 1);
  }
  EvalReport report;
  for (std::size_t i = fixed_head.size(); i + 2 < header.size(); ++i) {
    if (header[i].rfind("auc_", 0) != 0) throw ParseError("unexpected column '" + header[i] + "'", 1);
    report.class_names.push_back(header[i].substr(4));
  }
  auto number = [](const std::string& field, std::size_t line) {
    if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto v = detail::parse_double(field);
    if (!v) throw ParseError("not a number: '" + field + "'", line);
    return *v;
  };
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    const auto line = records[r].line;
    if (f.size() != header.size()) throw ParseError("expected " + std::to_string(header.size()) + " fields", line);
    if (report.task.empty()) report.task = f[0];
    if (f[0] != report.task) throw ParseError("cells CSV mixes tasks", line);
    EvalCell cell;
    cell.condition = f[1];
    try {
      cell.model = parse_model_kind(f[2]);
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line);
    }
    const auto seed = number(f[3], line);
    if (!(seed >= 0) || seed != std::floor(seed)) throw ParseError("bad seed", line);
    cell.seed = static_cast<std::uint64_t>(seed);
    cell.f1_macro = number(f[4], line);
    cell.f1_micro = number(f[5], line);
    cell.selected_features = static_cast<std::size_t>(number(f[6], line));
    for (std::size_t k = 0; k < report.class_names.size(); ++k) cell.auc.push_back(number(f[7 + k], line));
    std::string row;
    for (const char ch : f[f.size() - 2] + ";") {
      if (ch != ';') {
        row += ch;
        continue;
      }
      std::vector<long> counts;
      std::size_t pos = 0;
      while (pos < row.size()) {
        const auto next = row.find(' ', pos);
        const auto token = row.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!token.empty()) counts.push_back(static_cast<long>(number(token, line)));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
      if (!counts.empty()) cell.confusion.push_back(std::move(counts));
      row.clear();
    }
    cell.spec = f.back();
    if (std::find(report.conditions.begin(), report.conditions.end(), cell.condition) == report.conditions.end()) {
      report.conditions.push_back(cell.condition);
    }
    if (std::find(report.models.begin(), report.models.end(), cell.model) == report.models.end()) {
      report.models.push_back(cell.model);
    }
    report.cells.push_back(std::move(cell));
  }
  if (report.cells.empty()) throw ParseError("cells CSV has no rows", 1);
  return report;
}

}  // namespace cohort
