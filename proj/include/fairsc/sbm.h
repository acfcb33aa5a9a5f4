#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fairsc/fairness.h"
#include "fairsc/graph.h"
#include "fairsc/kmeans.h"

namespace fairsc {

// Stochastic block model with planted clusters and demographic groups. A pair
// of vertices is joined with probability
//   a  same cluster, same group
//   b  different cluster, same group
//   c  same cluster, different group
//   d  different cluster, different group
// Group s makes up the fraction group_fractions[s] of every cluster, so the
// planted clustering is proportional while the group split is not.
struct FairSbmConfig {
  std::vector<std::size_t> cluster_sizes;
  std::vector<double> group_fractions;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  int k() const { return static_cast<int>(cluster_sizes.size()); }
  int h() const { return static_cast<int>(group_fractions.size()); }
  std::size_t n() const;

  // |C_l| = n/k, eta_s = 1/h. Throws ConfigError when k*h does not divide n.
  static FairSbmConfig balanced(std::size_t n, int k, int h, double a, double b, double c,
                                double d);
};

struct SbmValidation {
  // Require a > b > c > d >= 0. When false only 0 <= p <= 1 is checked.
  bool strict_probabilities = true;
};

// Throws ConfigError on any violated invariant.
void validate(const FairSbmConfig& cfg, const SbmValidation& opts = {});

// |V_s| = n/h, |C_l| = n/k and eta_s = 1/h exactly.
bool is_balanced(const FairSbmConfig& cfg);

// Vertex count of the block C_l ∩ V_s.
std::size_t block_size(const FairSbmConfig& cfg, int cluster, int group);

struct PlantedGraph {
  Graph graph;
  Clustering truth;
  GroupAssignment groups;
};

// Unit-weight sample. Vertices are laid out cluster-major, group-minor and
// then relabelled by a uniformly random permutation.
PlantedGraph sample_fair_sbm(const FairSbmConfig& cfg, Rng& rng, const SbmValidation& opts = {});

// Expected adjacency (zero diagonal) in the canonical cluster-major,
// group-minor order. Balanced configurations only.
Eigen::MatrixXd expected_adjacency(const FairSbmConfig& cfg, const SbmValidation& opts = {});

// (lambda_1 - a) I - expected_adjacency: every expected degree is lambda_1 - a.
Eigen::MatrixXd expected_laplacian(const FairSbmConfig& cfg, const SbmValidation& opts = {});

// Planted labels in canonical order.
Clustering canonical_truth(const FairSbmConfig& cfg);
GroupAssignment canonical_groups(const FairSbmConfig& cfg);

// Closed-form spectra for a balanced configuration with a > b > c > d >= 0.
struct SpectrumOracle {
  double lambda1 = 0.0;
  double lambda_group = 0.0;      // lambda_2 .. lambda_h
  double lambda_cluster = 0.0;    // lambda_{h+1} .. lambda_{h+k-1}
  double lambda_mixed = 0.0;      // lambda_{h+k} .. lambda_{hk}
  // Eigenvalues of expected_adjacency + a I, in the order lambda_1..lambda_n.
  std::vector<double> adjacency;
  // Eigenvalues of Z^T L Z for the expected Laplacian L and any orthonormal
  // basis Z of null(F^T); ascending, n - h + 1 values.
  std::vector<double> constrained_laplacian;
  // k smallest of the above: 0 and lambda_1 - lambda_{h+1} (k - 1 times).
  std::vector<double> constrained_lowest;
  int rank = 0;  // rank of expected_adjacency + a I
};

SpectrumOracle theoretical_spectrum(const FairSbmConfig& cfg);

// n x k matrix with columns 1/sqrt(n) and n_1..n_{k-1}: n_i is zero on blocks
// before i, (k-i) q_i on block i and -q_i after it, with blocks of n/k rows and
// q_i = 1/sqrt((n/k)(k-i)^2 + (n/k)(k-i)). Rows agree exactly within a block
// and lie sqrt(2k/n) apart across blocks.
Eigen::MatrixXd canonical_embedding(std::size_t n, int k);

// Moves each vertex of group 0 to group 1 independently with probability p.
// If group 0 empties the result has a single group.
GroupAssignment perturb_groups(const GroupAssignment& groups, double p, Rng& rng);

// Twelve-vertex pattern scaled by `scale`: blocks of 3*scale vertices
// C1∩V1, C1∩V2, C2∩V1, C2∩V2 in this order. A pair is joined with
// probability a when both ends are in C1, both in C2, or both in V2, and with
// probability b otherwise.
PlantedGraph counterexample_graph(int scale, double a, double b, Rng& rng);

}  // namespace fairsc
