#include "fairsc/kmeans.h"

#include <limits>
#include <numeric>
#include <string>

#include "fairsc/error.h"

namespace fairsc {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finaliser over base + golden-ratio stride
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

void check_k(const PointSet& points, int k) {
  if (k < 1 || k > points.rows()) {
    throw Error(ErrorCode::kInvalidK, "k=" + std::to_string(k) + " for " +
                                          std::to_string(points.rows()) + " points");
  }
}

Eigen::MatrixXd centroids(const PointSet& points, const std::vector<int>& labels, int k,
                          std::vector<Eigen::Index>& sizes) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, points.cols());
  sizes.assign(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    c.row(l) += points.row(i);
    ++sizes[static_cast<std::size_t>(l)];
  }
  for (int l = 0; l < k; ++l) {
    if (sizes[static_cast<std::size_t>(l)] > 0) {
      c.row(l) /= static_cast<double>(sizes[static_cast<std::size_t>(l)]);
    }
  }
  return c;
}

double assignment_cost(const PointSet& points, const Eigen::MatrixXd& centers,
                       const std::vector<int>& labels) {
  double cost = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    cost += (points.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return cost;
}

}  // namespace

double kmeans_cost(const PointSet& points, const Clustering& c) {
  if (c.size() != static_cast<std::size_t>(points.rows())) {
    throw Error(ErrorCode::kLengthMismatch, "labels do not match point count");
  }
  const auto sizes = c.cluster_sizes();
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    if (sizes[l] == 0) throw Error(ErrorCode::kEmptyCluster, "cluster " + std::to_string(l));
  }
  std::vector<Eigen::Index> counts;
  const Eigen::MatrixXd centers = centroids(points, c.labels, c.k, counts);
  return assignment_cost(points, centers, c.labels);
}

std::vector<Eigen::Index> kmeanspp_seeds(const PointSet& points, int k, Rng& rng) {
  check_k(points, k);
  const Eigen::Index n = points.rows();
  std::vector<Eigen::Index> seeds;
  seeds.reserve(static_cast<std::size_t>(k));
  std::uniform_int_distribution<Eigen::Index> uniform(0, n - 1);
  seeds.push_back(uniform(rng));
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  while (static_cast<int>(seeds.size()) < k) {
    const auto last = points.row(seeds.back());
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& d = nearest[static_cast<std::size_t>(i)];
      d = std::min(d, (points.row(i) - last).squaredNorm());
      total += d;
    }
    if (total > 0.0) {
      std::discrete_distribution<Eigen::Index> pick(nearest.begin(), nearest.end());
      seeds.push_back(pick(rng));
    } else {
      seeds.push_back(uniform(rng));
    }
  }
  return seeds;
}

LloydTrace lloyd(const PointSet& points, Eigen::MatrixXd centers, int max_iter) {
  if (max_iter < 1) throw Error(ErrorCode::kConfig, "max_iter must be >= 1");
  check_k(points, static_cast<int>(centers.rows()));
  const Eigen::Index n = points.rows();
  const auto k = static_cast<int>(centers.rows());
  LloydTrace trace;
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<Eigen::Index> sizes;

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int l = 0; l < k; ++l) {
        const double d = (points.row(i) - centers.row(l)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = l;
        }
      }
      auto& label = labels[static_cast<std::size_t>(i)];
      if (label != best) {
        label = best;
        changed = true;
      }
    }

    // Empty-cluster repair: move the worst-fitted point of a cluster that can
    // spare it into the empty cluster.
    sizes.assign(static_cast<std::size_t>(k), 0);
    for (int label : labels) ++sizes[static_cast<std::size_t>(label)];
    for (int empty = 0; empty < k; ++empty) {
      if (sizes[static_cast<std::size_t>(empty)] > 0) continue;
      Eigen::Index worst = -1;
      double worst_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(l)] < 2) continue;
        const double d = (points.row(i) - centers.row(l)).squaredNorm();
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      auto& label = labels[static_cast<std::size_t>(worst)];
      --sizes[static_cast<std::size_t>(label)];
      label = empty;
      ++sizes[static_cast<std::size_t>(empty)];
      centers.row(empty) = points.row(worst);
      changed = true;
    }

    centers = centroids(points, labels, k, sizes);
    trace.costs.push_back(assignment_cost(points, centers, labels));
    trace.iterations = iter + 1;
    if (!changed) {
      trace.converged = true;
      break;
    }
  }
  trace.clustering = Clustering{k, std::move(labels)};
  return trace;
}

KMeansResult kmeans(const PointSet& points, int k, Rng& rng, const KMeansOptions& options) {
  check_k(points, k);
  if (options.replicates < 1) throw Error(ErrorCode::kConfig, "replicates must be >= 1");
  if (options.max_iter < 1) throw Error(ErrorCode::kConfig, "max_iter must be >= 1");
  if (!points.allFinite()) throw Error(ErrorCode::kConfig, "points must be finite");
  const std::uint64_t base = rng();

  KMeansResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.replicates; ++r) {
    Rng local(mix_seed(base, static_cast<std::uint64_t>(r)));
    const auto seeds = kmeanspp_seeds(points, k, local);
    Eigen::MatrixXd centers(k, points.cols());
    for (int l = 0; l < k; ++l) centers.row(l) = points.row(seeds[static_cast<std::size_t>(l)]);
    LloydTrace trace = lloyd(points, std::move(centers), options.max_iter);
    const double cost = trace.costs.back();
    // Strict comparison keeps the lowest replicate index on ties.
    if (cost < best.cost) {
      best.cost = cost;
      best.clustering = std::move(trace.clustering);
    }
  }
  return best;
}

}  // namespace fairsc
