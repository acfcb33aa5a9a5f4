#include "fairsc/spectral.h"

#include <iostream>
#include <string>

#include "fairsc/error.h"
#include "fairsc/linalg.h"

namespace fairsc {

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kUnnormalized: return "sc-u";
    case Algorithm::kNormalized: return "sc-n";
    case Algorithm::kFairUnnormalized: return "fair-u";
    case Algorithm::kFairNormalized: return "fair-n";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kUnnormalized, Algorithm::kNormalized, Algorithm::kFairUnnormalized,
                 Algorithm::kFairNormalized}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

bool is_fair(Algorithm algorithm) {
  return algorithm == Algorithm::kFairUnnormalized || algorithm == Algorithm::kFairNormalized;
}

bool is_normalized(Algorithm algorithm) {
  return algorithm == Algorithm::kNormalized || algorithm == Algorithm::kFairNormalized;
}

namespace {

void check_k(const Graph& g, int k, Eigen::Index max_k) {
  if (k < 1 || k > max_k) {
    throw Error(ErrorCode::kInvalidK, "k=" + std::to_string(k) + " outside [1," +
                                          std::to_string(max_k) + "] for n=" +
                                          std::to_string(g.size()));
  }
}

void check_no_isolated(const Graph& g) {
  const Eigen::VectorXd deg = g.degrees();
  for (Eigen::Index i = 0; i < deg.size(); ++i) {
    if (deg(i) < kIsolatedDegreeTol) {
      throw Error(ErrorCode::kIsolatedVertex, "vertex " + std::to_string(i) + " has degree 0");
    }
  }
}

void check_groups(const Graph& g, const GroupAssignment& groups) {
  if (groups.size() != g.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(groups.size()) +
                                                " group labels for " + std::to_string(g.size()) +
                                                " vertices");
  }
}

// k smallest eigenpairs plus, when available, the gap to the (k+1)-th.
struct Spectrum {
  EigenPairs pairs;
  double gap = std::numeric_limits<double>::quiet_NaN();
};

Spectrum lowest(const Eigen::MatrixXd& s, int k, Algorithm algorithm) {
  const Eigen::Index extra = std::min<Eigen::Index>(k + 1, s.rows());
  EigenPairs all = smallest_eigenpairs(s, extra);
  Spectrum out;
  if (extra > k) {
    out.gap = all.values(k) - all.values(k - 1);
    if (out.gap < kDegenerateGapTol) {
      std::clog << "warning: " << algorithm_name(algorithm) << ": eigengap at position " << k
                << " is " << out.gap << "; embedding basis is not unique\n";
    }
  }
  out.pairs.values = all.values.head(k);
  out.pairs.vectors = all.vectors.leftCols(k);
  return out;
}

SpectralResult finish(Eigen::MatrixXd h, Spectrum spectrum, Algorithm algorithm, Algorithm solved,
                      int k, Rng& rng, const KMeansOptions& km) {
  SpectralResult result;
  result.clustering = kmeans(h, k, rng, km).clustering;
  result.embedding.matrix = std::move(h);
  result.embedding.algorithm = algorithm;
  result.embedding.solved_as = solved;
  result.embedding.eigenvalues = std::move(spectrum.pairs.values);
  result.embedding.eigengap = spectrum.gap;
  return result;
}

}  // namespace

SpectralResult sc_unnormalized(const Graph& g, int k, Rng& rng, const KMeansOptions& km) {
  check_k(g, k, static_cast<Eigen::Index>(g.size()));
  Spectrum spectrum = lowest(laplacian(g), k, Algorithm::kUnnormalized);
  Eigen::MatrixXd h = spectrum.pairs.vectors;
  return finish(std::move(h), std::move(spectrum), Algorithm::kUnnormalized,
                Algorithm::kUnnormalized, k, rng, km);
}

SpectralResult sc_normalized(const Graph& g, int k, Rng& rng, const KMeansOptions& km) {
  check_k(g, k, static_cast<Eigen::Index>(g.size()));
  check_no_isolated(g);
  const Eigen::VectorXd inv_sqrt_deg = g.degrees().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd sym =
      inv_sqrt_deg.asDiagonal() * laplacian(g) * inv_sqrt_deg.asDiagonal();
  Spectrum spectrum = lowest(sym, k, Algorithm::kNormalized);
  Eigen::MatrixXd h = inv_sqrt_deg.asDiagonal() * spectrum.pairs.vectors;
  return finish(std::move(h), std::move(spectrum), Algorithm::kNormalized, Algorithm::kNormalized,
                k, rng, km);
}

SpectralResult fair_sc_unnormalized(const Graph& g, int k, const GroupAssignment& groups, Rng& rng,
                                    const KMeansOptions& km) {
  check_groups(g, groups);
  if (groups.h() == 1) {
    SpectralResult r = sc_unnormalized(g, k, rng, km);
    r.embedding.algorithm = Algorithm::kFairUnnormalized;
    return r;
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  check_k(g, k, n - groups.h() + 1);
  const NullspaceBasis z(fairness_matrix(groups).transpose());
  Spectrum spectrum = lowest(z.compress(laplacian(g)), k, Algorithm::kFairUnnormalized);
  Eigen::MatrixXd h = z.expand(spectrum.pairs.vectors);
  return finish(std::move(h), std::move(spectrum), Algorithm::kFairUnnormalized,
                Algorithm::kFairUnnormalized, k, rng, km);
}

SpectralResult fair_sc_normalized(const Graph& g, int k, const GroupAssignment& groups, Rng& rng,
                                  const KMeansOptions& km) {
  check_groups(g, groups);
  if (groups.h() == 1) {
    SpectralResult r = sc_normalized(g, k, rng, km);
    r.embedding.algorithm = Algorithm::kFairNormalized;
    return r;
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  check_k(g, k, n - groups.h() + 1);
  check_no_isolated(g);
  const NullspaceBasis z(fairness_matrix(groups).transpose());
  SpdRoot q;
  try {
    q = spd_sqrt_inv(z.compress_diagonal(g.degrees()));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotPositiveDefinite) throw;
    throw Error(ErrorCode::kIsolatedVertex, std::string("Z^T D Z is singular: ") + e.what());
  }
  const Eigen::MatrixXd reduced = q.inverse_root * z.compress(laplacian(g)) * q.inverse_root;
  Spectrum spectrum = lowest(reduced, k, Algorithm::kFairNormalized);
  Eigen::MatrixXd h = z.expand(q.inverse_root * spectrum.pairs.vectors);
  return finish(std::move(h), std::move(spectrum), Algorithm::kFairNormalized,
                Algorithm::kFairNormalized, k, rng, km);
}

SpectralResult run_spectral(Algorithm algorithm, const Graph& g, int k,
                            const GroupAssignment* groups, Rng& rng, const KMeansOptions& km) {
  if (is_fair(algorithm) && groups == nullptr) {
    throw Error(ErrorCode::kConfig, std::string(algorithm_name(algorithm)) + " needs group labels");
  }
  switch (algorithm) {
    case Algorithm::kUnnormalized: return sc_unnormalized(g, k, rng, km);
    case Algorithm::kNormalized: return sc_normalized(g, k, rng, km);
    case Algorithm::kFairUnnormalized: return fair_sc_unnormalized(g, k, *groups, rng, km);
    case Algorithm::kFairNormalized: return fair_sc_normalized(g, k, *groups, rng, km);
  }
  throw Error(ErrorCode::kConfig, "unknown algorithm");
}

}  // namespace fairsc
