#include "rarc/numkernel.hpp"

#include "rarc/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace rarc {

namespace {

constexpr double kSignThreshold = 1e-12;
constexpr double kRankTol = 1e-12;

void require_finite(const Matrix& m, const char* op) {
  if (!all_finite(m)) {
    throw DomainError(std::string(op) + ": input has non-finite entries");
  }
}

// Flip column j of `primary` (and of `companion`, when given) so that the
// first component above the threshold is positive.
void normalize_column_signs(Matrix& primary, Matrix* companion) {
  for (Index j = 0; j < primary.cols(); ++j) {
    const double scale = primary.col(j).cwiseAbs().maxCoeff();
    for (Index i = 0; i < primary.rows(); ++i) {
      const double x = primary(i, j);
      if (std::abs(x) > kSignThreshold * scale) {
        if (x < 0.0) {
          primary.col(j) *= -1.0;
          if (companion != nullptr) companion->col(j) *= -1.0;
        }
        break;
      }
    }
  }
}

bool rank_deficient(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0) return false;
  return s(0) == 0.0 || s(s.size() - 1) <= kRankTol * s(0);
}

}  // namespace

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

SymEigResult sym_eig(const Matrix& s) {
  if (s.rows() != s.cols()) {
    throw DimensionError("sym_eig: matrix is " + std::to_string(s.rows()) +
                         "x" + std::to_string(s.cols()) + ", expected square");
  }
  require_finite(s, "sym_eig");
  const double scale = max_abs(s);
  if (max_abs(s - s.transpose()) > 1e-10 * (1.0 + scale)) {
    throw DomainError("sym_eig: matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw NumericalError("sym_eig: tridiagonal QL iteration did not converge");
  }
  SymEigResult out{es.eigenvalues(), es.eigenvectors()};
  normalize_column_signs(out.eigenvectors, nullptr);
  return out;
}

double lambda_min(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  return sym_eig(s).eigenvalues(0);
}

QrResult qr_thin(const Matrix& m) {
  const Index r = m.rows();
  const Index t = m.cols();
  if (r < t) {
    throw DimensionError("qr_thin: needs rows >= cols, got " +
                         std::to_string(r) + "x" + std::to_string(t));
  }
  require_finite(m, "qr_thin");
  if (t > 0 && rank_deficient(m)) {
    Index bad = t - 1;
    for (Index j = 0; j < t; ++j) {
      if (rank_deficient(m.leftCols(j + 1))) {
        bad = j;
        break;
      }
    }
    throw RankError("qr_thin: column " + std::to_string(bad) +
                        " is linearly dependent on the preceding columns",
                    bad);
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  QrResult out;
  out.q = qr.householderQ() * Matrix::Identity(r, t);
  out.r = qr.matrixQR().topRows(t).triangularView<Eigen::Upper>();
  for (Index j = 0; j < t; ++j) {
    if (out.r(j, j) < 0.0) {
      out.r.row(j) *= -1.0;
      out.q.col(j) *= -1.0;
    }
  }
  return out;
}

SvdResult svd_thin(const Matrix& m) {
  require_finite(m, "svd_thin");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  normalize_column_signs(out.u, &out.v);
  return out;
}

}  // namespace rarc
