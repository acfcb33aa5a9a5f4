#include "fairsc/fairness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "fairsc/error.h"

namespace fairsc {

GroupAssignment::GroupAssignment(int h, std::vector<int> labels)
    : h_(h), labels_(std::move(labels)) {
  if (h_ < 1) throw Error(ErrorCode::kConfig, "group count must be at least 1");
  for (const auto size : group_sizes()) {
    if (size == 0) throw Error(ErrorCode::kConfig, "every group must be non-empty");
  }
}

GroupAssignment GroupAssignment::from_labels(std::vector<int> labels) {
  int h = 0;
  for (int label : labels) {
    if (label < 0) throw Error(ErrorCode::kConfig, "negative group label");
    h = std::max(h, label + 1);
  }
  return GroupAssignment(h, std::move(labels));
}

GroupAssignment GroupAssignment::compacted(const std::vector<int>& labels) {
  std::map<int, int> remap;
  for (int label : labels) remap.emplace(label, 0);
  int next = 0;
  for (auto& [label, dense] : remap) dense = next++;
  std::vector<int> dense_labels;
  dense_labels.reserve(labels.size());
  for (int label : labels) dense_labels.push_back(remap.at(label));
  return GroupAssignment(next, std::move(dense_labels));
}

std::vector<std::size_t> GroupAssignment::group_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(h_), 0);
  for (int label : labels_) {
    if (label < 0 || label >= h_) {
      throw Error(ErrorCode::kIndex, "group label " + std::to_string(label) + " outside [0," +
                                         std::to_string(h_) + ")");
    }
    ++sizes[static_cast<std::size_t>(label)];
  }
  return sizes;
}

Eigen::MatrixXd fairness_matrix(const GroupAssignment& groups) {
  if (groups.h() < 2) {
    throw Error(ErrorCode::kSingleGroup, "fairness matrix needs at least two groups");
  }
  const auto n = static_cast<Eigen::Index>(groups.size());
  const auto sizes = groups.group_sizes();
  Eigen::MatrixXd f(n, groups.h() - 1);
  for (Eigen::Index s = 0; s < f.cols(); ++s) {
    const double share = static_cast<double>(sizes[static_cast<std::size_t>(s)]) / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      f(i, s) = (groups[static_cast<std::size_t>(i)] == s ? 1.0 : 0.0) - share;
    }
  }
  return f;
}

std::vector<std::vector<std::size_t>> group_cluster_counts(const Clustering& c,
                                                           const GroupAssignment& groups) {
  if (c.size() != groups.size()) {
    throw Error(ErrorCode::kLengthMismatch, "clustering and group labels differ in length");
  }
  c.cluster_sizes();  // label range check
  std::vector<std::vector<std::size_t>> counts(
      static_cast<std::size_t>(c.k), std::vector<std::size_t>(static_cast<std::size_t>(groups.h()), 0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    ++counts[static_cast<std::size_t>(c.labels[i])][static_cast<std::size_t>(groups[i])];
  }
  return counts;
}

BalanceProfile balance_profile(const Clustering& c, const GroupAssignment& groups) {
  const auto counts = group_cluster_counts(c, groups);
  BalanceProfile profile;
  profile.minimum = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < counts.size(); ++l) {
    const auto& row = counts[l];
    std::size_t members = 0;
    for (auto v : row) members += v;
    if (members == 0) throw Error(ErrorCode::kEmptyCluster, "cluster " + std::to_string(l));
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    // Over ordered pairs the minimum ratio is smallest count / largest count.
    const double balance = static_cast<double>(*lo) / static_cast<double>(*hi);
    profile.per_cluster.push_back(balance);
    profile.average += balance;
    profile.minimum = std::min(profile.minimum, balance);
  }
  if (!counts.empty()) profile.average /= static_cast<double>(counts.size());
  return profile;
}

bool is_proportional(const Clustering& c, const GroupAssignment& groups, double tol) {
  const auto counts = group_cluster_counts(c, groups);
  const auto sizes = groups.group_sizes();
  const auto n = static_cast<double>(groups.size());
  for (std::size_t l = 0; l < counts.size(); ++l) {
    std::size_t members = 0;
    for (auto v : counts[l]) members += v;
    if (members == 0) throw Error(ErrorCode::kEmptyCluster, "cluster " + std::to_string(l));
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const double within = static_cast<double>(counts[l][s]) / static_cast<double>(members);
      const double overall = static_cast<double>(sizes[s]) / n;
      if (std::abs(within - overall) > tol) return false;
    }
  }
  return true;
}

}  // namespace fairsc
