#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fairsc/graph.h"

namespace fairsc {

// Demographic group label per vertex, 0-based. Every group in [0, h) is
// non-empty.
class GroupAssignment {
 public:
  GroupAssignment() = default;
  GroupAssignment(int h, std::vector<int> labels);

  // h = max label + 1; throws if some group in between is unused.
  static GroupAssignment from_labels(std::vector<int> labels);
  // Renumbers the used labels densely, preserving their order.
  static GroupAssignment compacted(const std::vector<int>& labels);

  int h() const { return h_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }
  int operator[](std::size_t i) const { return labels_[i]; }
  std::vector<std::size_t> group_sizes() const;

 private:
  int h_ = 0;
  std::vector<int> labels_;
};

// n x (h-1) matrix whose column s is f^(s) - (|V_s|/n) 1 for s = 0..h-2; the
// last group is the one left out.
Eigen::MatrixXd fairness_matrix(const GroupAssignment& groups);

struct BalanceProfile {
  std::vector<double> per_cluster;
  double average = 0.0;
  double minimum = 0.0;
};

// Per-cluster balance min_{s != s'} |V_s ∩ C_l| / |V_s' ∩ C_l|, 0 when a
// group is missing from the cluster. With a single group every cluster has
// balance 1.
BalanceProfile balance_profile(const Clustering& c, const GroupAssignment& groups);

inline constexpr double kDefaultProportionalityTol = 1e-9;

bool is_proportional(const Clustering& c, const GroupAssignment& groups,
                     double tol = kDefaultProportionalityTol);

// |V_s ∩ C_l| as a k x h table.
std::vector<std::vector<std::size_t>> group_cluster_counts(const Clustering& c,
                                                           const GroupAssignment& groups);

}  // namespace fairsc
