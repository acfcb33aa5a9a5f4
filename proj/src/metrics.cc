#include "fairsc/metrics.h"

#include <limits>
#include <string>

#include "fairsc/error.h"

namespace fairsc {

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  // Hungarian method (shortest augmenting paths with potentials) on the cost
  // matrix -weight; 1-based internally.
  const int n = static_cast<int>(weight.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int r = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -weight[r - 1][col - 1] - u[r] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int col = 1; col <= n; ++col) {
    if (match[col] > 0) assignment[match[col] - 1] = col - 1;
  }
  return assignment;
}

double misclassification_error(const Clustering& pred, const Clustering& truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(pred.size()) + " vs " +
                                                std::to_string(truth.size()) + " labels");
  }
  if (pred.k != truth.k) {
    throw Error(ErrorCode::kKMismatch, "k=" + std::to_string(pred.k) + " vs k=" +
                                           std::to_string(truth.k));
  }
  if (pred.size() == 0) return 0.0;
  pred.cluster_sizes();
  truth.cluster_sizes();
  const auto k = static_cast<std::size_t>(pred.k);
  std::vector<std::vector<double>> confusion(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    confusion[static_cast<std::size_t>(pred.labels[i])][static_cast<std::size_t>(truth.labels[i])] += 1.0;
  }
  const auto assignment = max_weight_assignment(confusion);
  std::size_t agree = 0;
  for (std::size_t l = 0; l < k; ++l) {
    agree += static_cast<std::size_t>(confusion[l][static_cast<std::size_t>(assignment[l])]);
  }
  return static_cast<double>(pred.size() - agree) / static_cast<double>(pred.size());
}

ClusteringReport report(const Graph& g, const Clustering& c, const GroupAssignment& groups,
                        const Clustering* truth) {
  ClusteringReport r;
  r.ratio_cut = ratio_cut(g, c);
  try {
    r.ncut = ncut(g, c);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroVolume) throw;
    r.ncut = std::numeric_limits<double>::quiet_NaN();
  }
  r.balance = balance_profile(c, groups);
  if (truth != nullptr) r.error = misclassification_error(c, *truth);
  return r;
}

}  // namespace fairsc
