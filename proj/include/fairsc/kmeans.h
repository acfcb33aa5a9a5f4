#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fairsc/graph.h"

namespace fairsc {

using Rng = std::mt19937_64;

// Rows are points.
using PointSet = Eigen::MatrixXd;

struct KMeansOptions {
  int replicates = 10;
  int max_iter = 300;
};

struct KMeansResult {
  Clustering clustering;
  double cost = 0.0;
};

// Best of `replicates` independent k-means++ seedings each refined by Lloyd
// iterations. Replicate r runs on its own generator seeded from one draw of
// `rng` mixed with r, so the result does not depend on evaluation order.
KMeansResult kmeans(const PointSet& points, int k, Rng& rng, const KMeansOptions& options = {});

// Within-cluster sum of squared distances to centroids.
double kmeans_cost(const PointSet& points, const Clustering& c);

// Indices of the k-means++ seeds: first uniform, then each next point drawn
// with probability proportional to its squared distance to the nearest seed
// (uniform when all such distances vanish).
std::vector<Eigen::Index> kmeanspp_seeds(const PointSet& points, int k, Rng& rng);

struct LloydTrace {
  Clustering clustering;
  std::vector<double> costs;  // cost after each assign/update iteration
  int iterations = 0;
  bool converged = false;
};

// Lloyd refinement from the given initial centers (k x dim). Ties go to the
// lowest center index; an emptied cluster takes the point farthest from its
// centroid among clusters with at least two members.
LloydTrace lloyd(const PointSet& points, Eigen::MatrixXd centers, int max_iter);

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace fairsc
