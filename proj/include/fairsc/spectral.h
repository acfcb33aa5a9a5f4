#pragma once

#include <limits>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "fairsc/fairness.h"
#include "fairsc/graph.h"
#include "fairsc/kmeans.h"

namespace fairsc {

enum class Algorithm {
  kUnnormalized,      // sc-u: RatioCut relaxation
  kNormalized,        // sc-n: NCut relaxation
  kFairUnnormalized,  // fair-u: RatioCut relaxation with F^T H = 0
  kFairNormalized,    // fair-n: NCut relaxation with F^T H = 0
};

std::string_view algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool is_fair(Algorithm algorithm);
bool is_normalized(Algorithm algorithm);

// Spectral embedding whose rows are handed to k-means.
struct Embedding {
  Eigen::MatrixXd matrix;  // n x k
  Algorithm algorithm = Algorithm::kUnnormalized;
  // Algorithm that actually ran; differs from `algorithm` when a fair variant
  // fell back to its standard counterpart because there is a single group.
  Algorithm solved_as = Algorithm::kUnnormalized;
  Eigen::VectorXd eigenvalues;  // k smallest of the solved eigenproblem
  double eigengap = std::numeric_limits<double>::quiet_NaN();  // lambda_{k+1} - lambda_k
};

struct SpectralResult {
  Clustering clustering;
  Embedding embedding;
};

// Eigengaps below this are reported on stderr; the solver's basis is used.
inline constexpr double kDegenerateGapTol = 1e-9;
// Degrees below this count as isolated vertices for the normalized variants.
inline constexpr double kIsolatedDegreeTol = 1e-12;

SpectralResult sc_unnormalized(const Graph& g, int k, Rng& rng, const KMeansOptions& km = {});
SpectralResult sc_normalized(const Graph& g, int k, Rng& rng, const KMeansOptions& km = {});
SpectralResult fair_sc_unnormalized(const Graph& g, int k, const GroupAssignment& groups, Rng& rng,
                                    const KMeansOptions& km = {});
SpectralResult fair_sc_normalized(const Graph& g, int k, const GroupAssignment& groups, Rng& rng,
                                  const KMeansOptions& km = {});

// Dispatch; `groups` may be null for the standard variants.
SpectralResult run_spectral(Algorithm algorithm, const Graph& g, int k,
                            const GroupAssignment* groups, Rng& rng, const KMeansOptions& km = {});

}  // namespace fairsc
