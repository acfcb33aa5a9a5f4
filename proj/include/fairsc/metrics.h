#pragma once

#include <optional>
#include <vector>

#include "fairsc/fairness.h"
#include "fairsc/graph.h"

namespace fairsc {

// Fraction of vertices whose label disagrees with the truth under the best
// relabelling of the predicted clusters. Requires pred.k == truth.k.
double misclassification_error(const Clustering& pred, const Clustering& truth);

// Maximum-weight perfect matching on a square matrix; returns the column
// assigned to each row.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight);

struct ClusteringReport {
  std::optional<double> error;
  BalanceProfile balance;
  double ratio_cut = 0.0;
  double ncut = 0.0;
  double runtime_ms = 0.0;
};

// ncut is NaN when some cluster has zero volume.
ClusteringReport report(const Graph& g, const Clustering& c, const GroupAssignment& groups,
                        const Clustering* truth = nullptr);

}  // namespace fairsc
