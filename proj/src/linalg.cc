#include "fairsc/linalg.h"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fairsc/error.h"

namespace fairsc {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw Error(ErrorCode::kNotSymmetric, "matrix is not square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    throw Error(ErrorCode::kNotSymmetric, "max |S - S^T| = " + std::to_string(asym));
  }
  return 0.5 * (s + s.transpose());
}

void check_info(const char* routine, lapack_int info) {
  if (info != 0) {
    throw Error(ErrorCode::kConvergenceFailure, std::string(routine) + " info=" + std::to_string(info));
  }
}

// Full eigendecomposition of the tridiagonal matrix (diag, offdiag) by divide
// and conquer.
Eigen::MatrixXd tridiagonal_all(Eigen::VectorXd diag, Eigen::VectorXd offdiag,
                                Eigen::VectorXd& values) {
  const auto n = static_cast<lapack_int>(diag.size());
  Eigen::MatrixXd vectors(diag.size(), diag.size());
  check_info("dstedc", LAPACKE_dstedc(LAPACK_COL_MAJOR, 'I', n, diag.data(), offdiag.data(),
                                      vectors.data(), n));
  values = diag;
  return vectors;
}

// The `count` smallest eigenpairs by MRRR, with bisection plus inverse
// iteration when MRRR does not converge.
Eigen::MatrixXd tridiagonal_lowest(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                                   Eigen::Index count, Eigen::VectorXd& values) {
  const auto n = static_cast<lapack_int>(diag.size());
  const auto il = lapack_int{1};
  const auto iu = static_cast<lapack_int>(count);
  Eigen::MatrixXd vectors(diag.size(), count);
  values.resize(diag.size());
  lapack_int found = 0;
  {
    Eigen::VectorXd d = diag;
    Eigen::VectorXd e = offdiag;
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int tryrac = 1;
    const lapack_int info =
        LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, il, iu, &found,
                       values.data(), vectors.data(), n, iu, support.data(), &tryrac);
    if (info == 0 && found == count) {
      values.conservativeResize(count);
      return vectors;
    }
  }
  Eigen::VectorXd d = diag;
  Eigen::VectorXd e = offdiag;
  std::vector<lapack_int> failed(static_cast<std::size_t>(n));
  check_info("dstevx", LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0,
                                      il, iu, 2.0 * LAPACKE_dlamch('S'), &found, values.data(),
                                      vectors.data(), n, failed.data()));
  if (found != count) {
    throw Error(ErrorCode::kConvergenceFailure, "dstevx found " + std::to_string(found) + " of " +
                                                    std::to_string(count) + " eigenpairs");
  }
  values.conservativeResize(count);
  return vectors;
}

}  // namespace

EigenPairs smallest_eigenpairs(const Eigen::MatrixXd& s, Eigen::Index count) {
  const Eigen::Index m = s.rows();
  if (count < 1 || count > m) {
    throw Error(ErrorCode::kInvalidK, "requested " + std::to_string(count) +
                                          " eigenpairs of a " + std::to_string(m) + "x" +
                                          std::to_string(m) + " matrix");
  }
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(symmetrized(s));
  Eigen::VectorXd diag = tri.diagonal();
  Eigen::VectorXd offdiag = Eigen::VectorXd::Zero(m);
  offdiag.head(m - 1) = tri.subDiagonal();

  EigenPairs out;
  const Eigen::MatrixXd tri_vectors = count == m ? tridiagonal_all(diag, offdiag, out.values)
                                                 : tridiagonal_lowest(diag, offdiag, count, out.values);
  out.vectors = tri.matrixQ() * tri_vectors;
  return out;
}

EigenPairs symmetric_eigen(const Eigen::MatrixXd& s) { return smallest_eigenpairs(s, s.rows()); }

NullspaceBasis::NullspaceBasis(const Eigen::MatrixXd& a) : n_(a.cols()) {
  if (a.rows() == 0 || n_ == 0) return;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a.transpose(), Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = kRankRelTol * (sigma.size() ? sigma(0) : 0.0);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) ++rank_;
  }
  if (rank_ == 0) return;
  // range(A^T) is spanned by the leading left singular vectors; the
  // reflectors of their QR factorisation complete them to an orthonormal
  // basis of R^n whose trailing columns span null(A).
  qr_.compute(svd.matrixU().leftCols(rank_));
}

Eigen::MatrixXd NullspaceBasis::matrix() const {
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n_, n_).rightCols(dim());
  if (rank_ == 0) return z;
  return qr_.householderQ() * z;
}

Eigen::MatrixXd NullspaceBasis::compress(const Eigen::MatrixXd& s) const {
  if (rank_ == 0) return s;
  const auto q = qr_.householderQ();
  Eigen::MatrixXd full = q.adjoint() * s;
  full = full * q;
  return full.bottomRightCorner(dim(), dim());
}

Eigen::MatrixXd NullspaceBasis::compress_diagonal(const Eigen::VectorXd& d) const {
  return compress(d.asDiagonal().toDenseMatrix());
}

Eigen::MatrixXd NullspaceBasis::expand(const Eigen::MatrixXd& y) const {
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(n_, y.cols());
  padded.bottomRows(dim()) = y;
  if (rank_ == 0) return padded;
  return qr_.householderQ() * padded;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& a) { return NullspaceBasis(a).matrix(); }

SpdRoot spd_sqrt_inv(const Eigen::MatrixXd& m) {
  const EigenPairs eig = symmetric_eigen(m);
  const Eigen::Index size = m.rows();
  const double floor = 1e-10 * m.trace() / static_cast<double>(size);
  if (!(eig.values(0) > floor)) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(eig.values(0)) + " <= " +
                    std::to_string(floor));
  }
  const Eigen::VectorXd root_values = eig.values.cwiseSqrt();
  const Eigen::MatrixXd& u = eig.vectors;
  SpdRoot out;
  out.root = u * root_values.asDiagonal() * u.transpose();
  out.inverse_root = u * root_values.cwiseInverse().asDiagonal() * u.transpose();
  // Exact symmetry for downstream eigensolves.
  out.root = 0.5 * (out.root + out.root.transpose()).eval();
  out.inverse_root = 0.5 * (out.inverse_root + out.inverse_root.transpose()).eval();
  return out;
}

}  // namespace fairsc
