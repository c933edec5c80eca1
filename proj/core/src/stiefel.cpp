#include "rarc/error.hpp"
#include "rarc/manifolds.hpp"

#include <cmath>
#include <string>

namespace rarc {

Stiefel::Stiefel(Index r, Index t) : r_(r), t_(t) {
  if (t < 1 || r < t) {
    throw DomainError("Stiefel: need 1 <= t <= r, got (" + std::to_string(r) +
                      "," + std::to_string(t) + ")");
  }
}

std::string Stiefel::name() const {
  return "St(" + std::to_string(r_) + "," + std::to_string(t_) + ")";
}

Matrix Stiefel::project(const Matrix& x, const Matrix& w) const {
  check_shape(x, "project");
  check_shape(w, "project");
  const Matrix xtw = x.transpose() * w;
  return w - x * (0.5 * (xtw + xtw.transpose()));
}

// Polar retraction: R_X(V) = (X + V)(I + V^T V)^{-1/2}, evaluated as
// M (M^T M)^{-1/2} with M = X + V so the result is orthonormal even when V
// carries small normal components.
Matrix Stiefel::retract(const Matrix& x, const Matrix& v) const {
  check_shape(x, "retract");
  check_shape(v, "retract");
  if ((v.array() == 0.0).all()) return x;
  const Matrix m = x + v;
  const SymEigResult eig = sym_eig(m.transpose() * m);
  const Vector inv_sqrt = eig.eigenvalues.array().rsqrt();
  return m * (eig.eigenvectors * inv_sqrt.asDiagonal() * eig.eigenvectors.transpose());
}

double Stiefel::feasibility_residual(const Matrix& x) const {
  return max_abs(x.transpose() * x - Matrix::Identity(t_, t_));
}

Matrix Stiefel::random_point(CounterRng& rng) const {
  return qr_thin(gaussian_matrix(r_, t_, rng)).q;
}

// --- Grassmann --------------------------------------------------------------

namespace {

// Geodesic data for exp_X(V): V = U diag(s) W^T. The geodesic is generated
// by the orthogonal map R that rotates X w_i towards u_i by angle s_i in each
// plane span{X w_i, u_i} and fixes their joint complement. exp_X(V) = R X
// and parallel transport of horizontal vectors is Delta -> R Delta.
struct GrassmannGeodesic {
  Matrix xw;     // X W
  Matrix u;      // U
  Vector cos_m1; // cos(s) - 1
  Vector sin;    // sin(s)

  GrassmannGeodesic(const Matrix& x, const Matrix& v) {
    const SvdResult svd = svd_thin(v);
    xw = x * svd.v;
    u = svd.u;
    cos_m1 = svd.s.array().cos() - 1.0;
    sin = svd.s.array().sin();
  }

  // R M (transpose = false) or R^T M (transpose = true).
  Matrix apply(const Matrix& m, bool transpose) const {
    const Matrix a = xw.transpose() * m;
    const Matrix b = u.transpose() * m;
    const double sign = transpose ? -1.0 : 1.0;
    return m + xw * (cos_m1.asDiagonal() * a) + u * (cos_m1.asDiagonal() * b) +
           sign * (u * (sin.asDiagonal() * a) - xw * (sin.asDiagonal() * b));
  }
};

bool is_zero(const Matrix& v) { return (v.array() == 0.0).all(); }

}  // namespace

Grassmann::Grassmann(Index r, Index t) : r_(r), t_(t) {
  if (t < 1 || t >= r) {
    throw DomainError("Grassmann: need 1 <= t < r, got (" + std::to_string(r) +
                      "," + std::to_string(t) + ")");
  }
}

std::string Grassmann::name() const {
  return "Gr(" + std::to_string(r_) + "," + std::to_string(t_) + ")";
}

Matrix Grassmann::project(const Matrix& x, const Matrix& w) const {
  check_shape(x, "project");
  check_shape(w, "project");
  return w - x * (x.transpose() * w);
}

Matrix Grassmann::retract(const Matrix& x, const Matrix& v) const { return exp(x, v); }

Matrix Grassmann::exp(const Matrix& x, const Matrix& v) const {
  check_shape(x, "exp");
  check_shape(v, "exp");
  if (is_zero(v)) return x;
  return GrassmannGeodesic(x, v).apply(x, false);
}

Matrix Grassmann::transport(const Matrix& x, const Matrix& v, const Matrix& u) const {
  check_shape(u, "transport");
  if (is_zero(v)) return u;
  return GrassmannGeodesic(x, v).apply(u, false);
}

Matrix Grassmann::inverse_transport(const Matrix& x, const Matrix& v,
                                    const Matrix& w) const {
  check_shape(w, "inverse_transport");
  if (is_zero(v)) return w;
  return GrassmannGeodesic(x, v).apply(w, true);
}

double Grassmann::feasibility_residual(const Matrix& x) const {
  return max_abs(x.transpose() * x - Matrix::Identity(t_, t_));
}

Matrix Grassmann::random_point(CounterRng& rng) const {
  return qr_thin(gaussian_matrix(r_, t_, rng)).q;
}

}  // namespace rarc
