#include "rarc/error.hpp"
#include "rarc/manifolds.hpp"

#include <cmath>
#include <string>

namespace rarc {

namespace {
constexpr double kBasisDropTol = 1e-8;
constexpr double kFeasibilityTol = 1e-10;

std::string shape_string(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}
}  // namespace

// --- Manifold ---------------------------------------------------------------

double Manifold::inner(const Matrix&, const Matrix& u, const Matrix& v) const {
  return (u.array() * v.array()).sum();
}

double Manifold::norm(const Matrix& x, const Matrix& u) const {
  return std::sqrt(inner(x, u, u));
}

Matrix Manifold::exp(const Matrix&, const Matrix&) const { unsupported("exp"); }

Matrix Manifold::transport(const Matrix&, const Matrix&, const Matrix&) const {
  unsupported("transport");
}

Matrix Manifold::inverse_transport(const Matrix&, const Matrix&,
                                   const Matrix&) const {
  unsupported("inverse_transport");
}

void Manifold::unsupported(const char* op) const {
  throw UnsupportedOperation(std::string(op) + " is not available on " + name());
}

void Manifold::check_shape(const Matrix& m, const char* what) const {
  if (m.rows() != rows() || m.cols() != cols()) {
    throw DimensionError(std::string(what) + ": expected ambient shape " +
                         shape_string(rows(), cols()) + " on " + name() +
                         ", got " + shape_string(m.rows(), m.cols()));
  }
}

Matrix Manifold::random_point(std::uint64_t seed) const {
  CounterRng rng(seed, Stream::kPoint);
  return random_point(rng);
}

Matrix Manifold::random_tangent(const Matrix& x, std::uint64_t seed) const {
  check_shape(x, "random_tangent");
  CounterRng rng(seed, Stream::kTangent);
  Matrix v = project(x, gaussian_matrix(rows(), cols(), rng));
  const double n = norm(x, v);
  if (!(n > 0.0)) {
    throw GeometryError("random_tangent: zero-dimensional tangent space on " +
                        name());
  }
  return v / n;
}

std::vector<Matrix> Manifold::tangent_basis(const Matrix& x) const {
  check_shape(x, "tangent_basis");
  const Index n = dim();
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(n));
  Matrix e = Matrix::Zero(rows(), cols());
  for (Index idx = 0; idx < e.size() && static_cast<Index>(basis.size()) < n;
       ++idx) {
    e(idx) = 1.0;
    Matrix w = project(x, e);
    e(idx) = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Matrix& b : basis) {
        w -= inner(x, b, w) * b;
      }
    }
    const double nw = norm(x, w);
    if (nw < kBasisDropTol) continue;
    basis.push_back(w / nw);
  }
  if (static_cast<Index>(basis.size()) < n) {
    throw GeometryError("tangent_basis: found " + std::to_string(basis.size()) +
                        " of " + std::to_string(n) + " directions on " + name());
  }
  return basis;
}

// --- Euclidean --------------------------------------------------------------

Euclidean::Euclidean(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw DomainError("Euclidean: shape must be positive");
  }
}

std::string Euclidean::name() const {
  return cols_ == 1 ? "R(" + std::to_string(rows_) + ")"
                    : "R(" + std::to_string(rows_) + "," + std::to_string(cols_) + ")";
}

Matrix Euclidean::project(const Matrix& x, const Matrix& w) const {
  check_shape(x, "project");
  check_shape(w, "project");
  return w;
}

Matrix Euclidean::retract(const Matrix& x, const Matrix& v) const {
  check_shape(v, "retract");
  return x + v;
}

Matrix Euclidean::exp(const Matrix& x, const Matrix& v) const { return retract(x, v); }

Matrix Euclidean::transport(const Matrix&, const Matrix&, const Matrix& u) const {
  return u;
}

Matrix Euclidean::inverse_transport(const Matrix&, const Matrix&,
                                    const Matrix& w) const {
  return w;
}

double Euclidean::feasibility_residual(const Matrix& x) const {
  return all_finite(x) ? 0.0 : INFINITY;
}

Matrix Euclidean::random_point(CounterRng& rng) const {
  return gaussian_matrix(rows_, cols_, rng);
}

// --- TangentBasis -----------------------------------------------------------

Matrix TangentBasis::to_ambient(const Vector& c) const {
  if (c.size() != size()) {
    throw DimensionError("to_ambient: coordinate length " +
                         std::to_string(c.size()) + " != basis size " +
                         std::to_string(size()));
  }
  const Manifold& m = *base.manifold;
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Index i = 0; i < c.size(); ++i) {
    out += c(i) * vectors[static_cast<std::size_t>(i)];
  }
  return out;
}

Vector TangentBasis::to_coords(const Matrix& w) const {
  const Manifold& m = *base.manifold;
  m.check_shape(w, "to_coords");
  Vector c(size());
  for (Index i = 0; i < size(); ++i) {
    c(i) = m.inner(base.coords, vectors[static_cast<std::size_t>(i)], w);
  }
  return c;
}

// --- free functions ---------------------------------------------------------

namespace {

void require_base(const Point& p, const TangentVector& v, const char* op) {
  if (!same_point(p, v.base)) {
    throw UsageError(std::string(op) + ": tangent vector is based at a different point");
  }
}

}  // namespace

Point make_point(ManifoldPtr m, Matrix coords) {
  m->check_shape(coords, "make_point");
  const double res = m->feasibility_residual(coords);
  if (!(res <= kFeasibilityTol)) {
    throw DomainError("make_point: point is not on " + m->name() +
                      " (residual " + std::to_string(res) + ")");
  }
  return Point{std::move(m), std::move(coords)};
}

bool same_point(const Point& a, const Point& b) {
  return a.manifold == b.manifold && a.coords.rows() == b.coords.rows() &&
         a.coords.cols() == b.coords.cols() && a.coords == b.coords;
}

TangentVector project_tangent(const Point& p, const Matrix& w) {
  return TangentVector{p, p.manifold->project(p.coords, w)};
}

double inner(const Point& p, const TangentVector& u, const TangentVector& v) {
  require_base(p, u, "inner");
  require_base(p, v, "inner");
  return p.manifold->inner(p.coords, u.coords, v.coords);
}

double norm(const Point& p, const TangentVector& u) {
  return std::sqrt(inner(p, u, u));
}

Point retract(const Point& p, const TangentVector& v) {
  require_base(p, v, "retract");
  return Point{p.manifold, p.manifold->retract(p.coords, v.coords)};
}

Point exp(const Point& p, const TangentVector& v) {
  require_base(p, v, "exp");
  return Point{p.manifold, p.manifold->exp(p.coords, v.coords)};
}

TangentVector transport(const Point& p, const TangentVector& v,
                        const TangentVector& u) {
  require_base(p, v, "transport");
  require_base(p, u, "transport");
  const Manifold& m = *p.manifold;
  Matrix moved = m.transport(p.coords, v.coords, u.coords);
  return TangentVector{Point{p.manifold, m.exp(p.coords, v.coords)}, std::move(moved)};
}

TangentVector inverse_transport(const Point& p, const TangentVector& v,
                                const TangentVector& w) {
  require_base(p, v, "inverse_transport");
  const Manifold& m = *p.manifold;
  if (!same_point(Point{p.manifold, m.exp(p.coords, v.coords)}, w.base)) {
    throw UsageError("inverse_transport: vector is not based at exp(p, v)");
  }
  return TangentVector{p, m.inverse_transport(p.coords, v.coords, w.coords)};
}

TangentBasis tangent_basis(const Point& p) {
  return TangentBasis{p, p.manifold->tangent_basis(p.coords)};
}

Point random_point(ManifoldPtr m, std::uint64_t seed) {
  Matrix x = m->random_point(seed);
  return Point{std::move(m), std::move(x)};
}

TangentVector random_tangent(const Point& p, std::uint64_t seed) {
  return TangentVector{p, p.manifold->random_tangent(p.coords, seed)};
}

}  // namespace rarc
