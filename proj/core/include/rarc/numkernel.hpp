#pragma once

#include <Eigen/Core>

namespace rarc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense kernels used by the manifold geometry and the cubic subsolver.
///
/// All routines are pure: they take values, return values and keep no state.
/// Inputs must be finite; violations raise DomainError, shape problems raise
/// DimensionError.

struct SymEigResult {
  Vector eigenvalues;   ///< ascending
  Matrix eigenvectors;  ///< orthonormal columns, matching order
};

/// Symmetric eigendecomposition S = Q diag(lambda) Q^T.
///
/// The input is symmetrized as (S + S^T)/2 before factorization; asymmetry
/// beyond 1e-10 * (1 + |S|_max) is rejected. Each eigenvector is signed so
/// that its first non-negligible component is positive.
SymEigResult sym_eig(const Matrix& s);

struct QrResult {
  Matrix q;  ///< r x t, orthonormal columns
  Matrix r;  ///< t x t, upper triangular with positive diagonal
};

/// Thin Householder QR of an r x t matrix with r >= t.
/// Throws RankError naming the first column that makes the leading block
/// rank deficient (smallest singular value <= 1e-12 * largest).
QrResult qr_thin(const Matrix& m);

struct SvdResult {
  Matrix u;  ///< r x k
  Vector s;  ///< k = min(r, t), descending, nonnegative
  Matrix v;  ///< t x k
};

/// Thin SVD. Columns of U are signed so that their first non-negligible
/// component is positive; V follows so that M = U diag(s) V^T.
SvdResult svd_thin(const Matrix& m);

double max_abs(const Matrix& m);
bool all_finite(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix (sym_eig(s).eigenvalues(0)).
double lambda_min(const Matrix& s);

}  // namespace rarc
