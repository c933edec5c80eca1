#include "rarc/error.hpp"
#include "rarc/manifolds.hpp"

#include "sphere_geometry.hpp"

#include <cmath>
#include <string>

namespace rarc {

namespace detail {

Vector sphere_exp(const Vector& x, const Vector& v) {
  const double theta = v.norm();
  if (theta == 0.0) return x;
  Vector y = std::cos(theta) * x + (std::sin(theta) / theta) * v;
  return y / y.norm();
}

// Parallel transport along the great circle is the rotation by theta in the
// plane span{x, u_hat}, identity on its complement.
Vector sphere_transport(const Vector& x, const Vector& v, const Vector& u) {
  const double theta = v.norm();
  if (theta == 0.0) return u;
  const Vector dir = v / theta;
  const double a = dir.dot(u);
  return u + ((std::cos(theta) - 1.0) * a) * dir - (std::sin(theta) * a) * x;
}

Vector sphere_inverse_transport(const Vector& x, const Vector& v, const Vector& w) {
  const double theta = v.norm();
  if (theta == 0.0) return w;
  const Vector dir = v / theta;
  const double c = std::cos(theta) - 1.0;
  const double s = std::sin(theta);
  const double wx = x.dot(w);
  const double wd = dir.dot(w);
  return w + (c * wx + s * wd) * x + (c * wd - s * wx) * dir;
}

}  // namespace detail

Sphere::Sphere(Index r) : r_(r) {
  if (r < 2) throw DomainError("Sphere: need r >= 2, got " + std::to_string(r));
}

std::string Sphere::name() const { return "Sp(" + std::to_string(r_) + ")"; }

Matrix Sphere::project(const Matrix& x, const Matrix& w) const {
  check_shape(x, "project");
  check_shape(w, "project");
  return w - x * x.col(0).dot(w.col(0));
}

Matrix Sphere::retract(const Matrix& x, const Matrix& v) const { return exp(x, v); }

Matrix Sphere::exp(const Matrix& x, const Matrix& v) const {
  check_shape(v, "exp");
  return detail::sphere_exp(x.col(0), v.col(0));
}

Matrix Sphere::transport(const Matrix& x, const Matrix& v, const Matrix& u) const {
  check_shape(u, "transport");
  return detail::sphere_transport(x.col(0), v.col(0), u.col(0));
}

Matrix Sphere::inverse_transport(const Matrix& x, const Matrix& v,
                                 const Matrix& w) const {
  check_shape(w, "inverse_transport");
  return detail::sphere_inverse_transport(x.col(0), v.col(0), w.col(0));
}

double Sphere::feasibility_residual(const Matrix& x) const {
  return std::abs(x.squaredNorm() - 1.0);
}

Matrix Sphere::random_point(CounterRng& rng) const {
  Matrix x = gaussian_matrix(r_, 1, rng);
  return x / x.norm();
}

// --- Oblique ----------------------------------------------------------------

Oblique::Oblique(Index r, Index t) : r_(r), t_(t) {
  if (r < 1 || t < 2) {
    throw DomainError("Oblique: need r >= 1 and t >= 2, got (" +
                      std::to_string(r) + "," + std::to_string(t) + ")");
  }
}

std::string Oblique::name() const {
  return "Ob(" + std::to_string(r_) + "," + std::to_string(t_) + ")";
}

Matrix Oblique::project(const Matrix& x, const Matrix& w) const {
  check_shape(x, "project");
  check_shape(w, "project");
  const Vector d = (x.array() * w.array()).rowwise().sum();
  return w - d.asDiagonal() * x;
}

Matrix Oblique::retract(const Matrix& x, const Matrix& v) const { return exp(x, v); }

Matrix Oblique::exp(const Matrix& x, const Matrix& v) const {
  check_shape(v, "exp");
  Matrix y(r_, t_);
  for (Index i = 0; i < r_; ++i) {
    y.row(i) = detail::sphere_exp(x.row(i).transpose(), v.row(i).transpose()).transpose();
  }
  return y;
}

Matrix Oblique::transport(const Matrix& x, const Matrix& v, const Matrix& u) const {
  check_shape(u, "transport");
  Matrix out(r_, t_);
  for (Index i = 0; i < r_; ++i) {
    out.row(i) = detail::sphere_transport(x.row(i).transpose(), v.row(i).transpose(),
                                          u.row(i).transpose())
                     .transpose();
  }
  return out;
}

Matrix Oblique::inverse_transport(const Matrix& x, const Matrix& v,
                                  const Matrix& w) const {
  check_shape(w, "inverse_transport");
  Matrix out(r_, t_);
  for (Index i = 0; i < r_; ++i) {
    out.row(i) = detail::sphere_inverse_transport(x.row(i).transpose(),
                                                  v.row(i).transpose(),
                                                  w.row(i).transpose())
                     .transpose();
  }
  return out;
}

double Oblique::feasibility_residual(const Matrix& x) const {
  return (x.rowwise().squaredNorm().array() - 1.0).abs().maxCoeff();
}

Matrix Oblique::random_point(CounterRng& rng) const {
  Matrix x = gaussian_matrix(r_, t_, rng);
  const Vector inv = x.rowwise().norm().cwiseInverse();
  return inv.asDiagonal() * x;
}

}  // namespace rarc
