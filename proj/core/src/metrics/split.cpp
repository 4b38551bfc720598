#include "cohort/metrics/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "common/log.hpp"

namespace cohort {
namespace {

struct GroupRows {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> rows;
};

GroupRows index_groups(std::span<const std::string> groups) {
  GroupRows g;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto& list = g.rows[groups[i]];
    if (list.empty()) g.order.push_back(groups[i]);
    list.push_back(i);
  }
  return g;
}

}  // namespace

SplitAssignment grouped_split(std::span<const std::string> groups, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split ratio must lie in (0, 1)");
  auto indexed = index_groups(groups);
  if (indexed.order.size() < 2) throw DataError("grouped split needs at least two groups");

  const double n = static_cast<double>(groups.size());
  const double wanted = ratio * n;
  for (const auto& name : indexed.order) {
    if (static_cast<double>(indexed.rows[name].size()) > wanted) {
      detail::logger().warn("group '{}' is larger than the training share; split ratio will be approximate", name);
    }
  }

  Rng rng(seed);
  rng.shuffle(std::span<std::string>(indexed.order));
  SplitAssignment out;
  out.seed = seed;
  out.ratio = ratio;
  std::size_t g = 0;
  for (; g + 1 < indexed.order.size() && static_cast<double>(out.train_indices.size()) < wanted; ++g) {
    const auto& rows = indexed.rows[indexed.order[g]];
    out.train_indices.insert(out.train_indices.end(), rows.begin(), rows.end());
  }
  for (; g < indexed.order.size(); ++g) {
    const auto& rows = indexed.rows[indexed.order[g]];
    out.test_indices.insert(out.test_indices.end(), rows.begin(), rows.end());
  }
  std::sort(out.train_indices.begin(), out.train_indices.end());
  std::sort(out.test_indices.begin(), out.test_indices.end());
  return out;
}

std::vector<int> group_kfold(std::span<const std::string> groups, int folds) {
  if (folds < 2) throw DataError("cross-validation needs at least two folds");
  const auto indexed = index_groups(groups);
  if (indexed.order.size() < static_cast<std::size_t>(folds)) {
    throw DataError("cross-validation has " + std::to_string(indexed.order.size()) + " groups for " +
                    std::to_string(folds) + " folds");
  }
  std::vector<std::string> order = indexed.order;
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return indexed.rows.at(a).size() > indexed.rows.at(b).size();
  });
  std::vector<std::size_t> load(static_cast<std::size_t>(folds), 0);
  std::vector<int> fold_of(groups.size(), 0);
  for (const auto& name : order) {
    const auto target = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
    for (const auto row : indexed.rows.at(name)) fold_of[row] = static_cast<int>(target);
    load[target] += indexed.rows.at(name).size();
  }
  return fold_of;
}

}  // namespace cohort
