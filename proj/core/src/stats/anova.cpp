#include "cohort/stats/anova.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cohort/common/error.hpp"
#include "cohort/stats/distributions.hpp"
#include "common/csv.hpp"

namespace cohort {
namespace {

struct RunningMoments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise combination.
  void absorb(const RunningMoments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double delta = o.mean - mean;
    mean += delta * o.n / total;
    m2 += o.m2 + delta * delta * n * o.n / total;
    n = total;
  }
};

void require_groups(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw DataError("test needs at least two groups");
  for (const auto& g : groups) {
    if (g.empty()) throw DataError("test groups must be non-empty");
  }
}

}  // namespace

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
  require_groups(groups);
  std::vector<RunningMoments> moments(groups.size());
  RunningMoments pooled;
  std::size_t total = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double x : groups[g]) moments[g].push(x);
    pooled.absorb(moments[g]);
    total += groups[g].size();
  }
  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(total - groups.size());
  if (r.df_within <= 0) throw DataError("one-way ANOVA is undefined when every group is a singleton");

  double ss_within = 0.0;
  double ss_between = 0.0;
  for (const auto& m : moments) {
    ss_within += m.m2;
    const double d = m.mean - pooled.mean;
    ss_between += m.n * d * d;
  }
  r.ss_between = ss_between;
  r.ss_within = ss_within;

  if (ss_between == 0.0) {
    r.f_stat = 0.0;
    r.p_value = 1.0;
    return r;
  }
  if (ss_within == 0.0) {
    r.f_stat = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }
  r.f_stat = (ss_between / r.df_between) / (ss_within / r.df_within);
  r.p_value = f_sf(r.f_stat, r.df_between, r.df_within);
  return r;
}

KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups) {
  require_groups(groups);
  struct Item {
    double value;
    std::size_t group;
  };
  std::vector<Item> pooled;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double x : groups[g]) {
      if (std::isnan(x)) throw DataError("Kruskal-Wallis input contains NaN");
      pooled.push_back({x, g});
    }
  }
  const auto n = static_cast<double>(pooled.size());
  if (pooled.size() < 3) throw DataError("Kruskal-Wallis needs at least three observations");
  std::stable_sort(pooled.begin(), pooled.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double average_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) rank_sum[pooled[k].group] += average_rank;
    tie_term += t * t * t - t;
    i = j;
  }

  KruskalWallisResult r;
  r.df = static_cast<int>(groups.size()) - 1;
  const double correction = 1.0 - tie_term / (n * n * n - n);
  if (correction <= 0.0) {
    r.h = 0.0;
    r.p_value = 1.0;
    return r;
  }
  double sum = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    sum += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
  }
  const double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
  r.h = std::max(0.0, h);
  r.p_value = chi2_sf(r.h, r.df);
  return r;
}

SelectionReport select_features(const FeatureMatrix& matrix, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("selection alpha must lie in (0, 1]");
  matrix.check_shape();
  const std::size_t classes = matrix.class_names.size();
  std::vector<bool> present(classes, false);
  for (int label : matrix.labels) present[static_cast<std::size_t>(label)] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw DataError("feature selection needs at least two classes present");
  }

  SelectionReport report;
  report.alpha = alpha;
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    std::vector<std::vector<double>> by_class(classes);
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      const double v = matrix.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (!std::isnan(v)) by_class[static_cast<std::size_t>(matrix.labels[r])].push_back(v);
    }
    std::erase_if(by_class, [](const std::vector<double>& g) { return g.empty(); });

    FeatureAnova entry;
    entry.name = matrix.feature_names[c];
    try {
      entry.result = one_way_anova(by_class);
    } catch (const DataError&) {
      entry.result = AnovaResult{};
    }
    entry.selected = entry.result.f_stat > 0.0 && entry.result.p_value <= alpha;
    if (entry.selected) report.selected.push_back(entry.name);
    report.per_feature.push_back(std::move(entry));
  }
  return report;
}

std::string to_csv(const SelectionReport& report) {
  std::string out = "feature,F,p,selected\n";
  for (const auto& f : report.per_feature) {
    out += detail::csv_field(f.name);
    out += ',';
    out += detail::format_double(f.result.f_stat);
    out += ',';
    out += detail::format_double(f.result.p_value);
    out += f.selected ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace cohort
