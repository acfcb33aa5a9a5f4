#pragma once

#include <Eigen/Dense>
#include <Eigen/Householder>

namespace fairsc {

// Eigenpairs of a symmetric matrix: ascending values, orthonormal columns.
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline constexpr double kSymmetryTol = 1e-9;

// The `count` smallest eigenvalues (with multiplicity) and orthonormal
// eigenvectors of the symmetric matrix `s`. The input is symmetrised as
// (S + S^T)/2 after checking max|S - S^T| <= kSymmetryTol * max(1, max|S|).
// Within a repeated eigenvalue any orthonormal basis may be returned.
EigenPairs smallest_eigenpairs(const Eigen::MatrixXd& s, Eigen::Index count);

// Full decomposition, equivalent to smallest_eigenpairs(s, s.rows()).
EigenPairs symmetric_eigen(const Eigen::MatrixXd& s);

// Numerical rank: singular values above 1e-10 * sigma_max.
inline constexpr double kRankRelTol = 1e-10;

// Orthonormal basis of null(A) for a p x n matrix A, stored implicitly as the
// trailing n - rank(A) columns of a product of rank(A) Householder
// reflectors; Z^T S Z and Z Y cost O(n^2 rank).
class NullspaceBasis {
 public:
  explicit NullspaceBasis(const Eigen::MatrixXd& a);

  Eigen::Index ambient_dim() const { return n_; }
  Eigen::Index rank() const { return rank_; }
  Eigen::Index dim() const { return n_ - rank_; }

  // Explicit n x dim() matrix Z.
  Eigen::MatrixXd matrix() const;
  // Z^T S Z for an n x n matrix S.
  Eigen::MatrixXd compress(const Eigen::MatrixXd& s) const;
  // Z^T diag(d) Z.
  Eigen::MatrixXd compress_diagonal(const Eigen::VectorXd& d) const;
  // Z Y for a dim() x m matrix Y.
  Eigen::MatrixXd expand(const Eigen::MatrixXd& y) const;

 private:
  Eigen::Index n_ = 0;
  Eigen::Index rank_ = 0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
};

// Explicit orthonormal basis of the nullspace of `a` (n x (n - rank)).
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& a);

struct SpdRoot {
  Eigen::MatrixXd root;          // Q with Q Q = M
  Eigen::MatrixXd inverse_root;  // Q^{-1}
};

// Symmetric positive definite square root via M = U diag(l) U^T. Requires the
// smallest eigenvalue to exceed 1e-10 * trace(M) / m.
SpdRoot spd_sqrt_inv(const Eigen::MatrixXd& m);

}  // namespace fairsc
