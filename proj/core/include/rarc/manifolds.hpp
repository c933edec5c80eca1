#pragma once

#include "rarc/numkernel.hpp"
#include "rarc/random.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rarc {

enum class ManifoldKind { Euclidean, Sphere, Oblique, Stiefel, Grassmann, Product };

struct Capabilities {
  bool has_exp = false;
  bool has_transport = false;
  bool retraction_is_second_order = false;
};

/// A matrix manifold embedded in R^{rows x cols} with the induced Euclidean
/// metric <U, V> = Tr(U^T V).
///
/// Everything here operates on ambient coordinates. Points and tangent
/// vectors are plain matrices of shape (rows(), cols()); the value types
/// further down add base-point bookkeeping on top of this interface.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const = 0;
  /// Short notation, e.g. "Sp(50)", "St(8,3)xSt(6,3)".
  virtual std::string name() const = 0;
  virtual Index dim() const = 0;
  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual Capabilities capabilities() const = 0;

  /// Orthogonal projection of an ambient matrix onto T_x M.
  virtual Matrix project(const Matrix& x, const Matrix& w) const = 0;
  virtual double inner(const Matrix& x, const Matrix& u, const Matrix& v) const;
  double norm(const Matrix& x, const Matrix& u) const;

  /// R_x(v). Returns x unchanged when v == 0.
  virtual Matrix retract(const Matrix& x, const Matrix& v) const = 0;
  virtual Matrix exp(const Matrix& x, const Matrix& v) const;
  /// Parallel transport of u along t -> exp_x(t v), t in [0, 1].
  virtual Matrix transport(const Matrix& x, const Matrix& v, const Matrix& u) const;
  /// Transport of w (tangent at exp_x(v)) back to T_x M.
  virtual Matrix inverse_transport(const Matrix& x, const Matrix& v,
                                   const Matrix& w) const;

  /// Distance of x from the constraint set, in the max-abs sense.
  virtual double feasibility_residual(const Matrix& x) const = 0;

  Matrix random_point(std::uint64_t seed) const;
  /// Unit-norm tangent vector at x drawn from a Gaussian and projected.
  Matrix random_tangent(const Matrix& x, std::uint64_t seed) const;
  virtual Matrix random_point(CounterRng& rng) const = 0;

  /// Orthonormal basis of T_x M: canonical ambient basis matrices are
  /// projected onto T_x M and orthonormalized by modified Gram-Schmidt with
  /// one reorthogonalization pass, in column-major order of the canonical
  /// index. Candidates whose residual norm falls below 1e-8 are dropped.
  std::vector<Matrix> tangent_basis(const Matrix& x) const;

  /// Throws DimensionError unless m has the ambient shape.
  void check_shape(const Matrix& m, const char* what) const;

 protected:
  [[noreturn]] void unsupported(const char* op) const;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

/// Trivial Euclidean manifold R^{rows x cols}, R_x(v) = x + v.
class Euclidean final : public Manifold {
 public:
  Euclidean(Index rows, Index cols = 1);

  ManifoldKind kind() const override { return ManifoldKind::Euclidean; }
  std::string name() const override;
  Index dim() const override { return rows_ * cols_; }
  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  Capabilities capabilities() const override { return {true, true, true}; }

  Matrix project(const Matrix& x, const Matrix& w) const override;
  Matrix retract(const Matrix& x, const Matrix& v) const override;
  Matrix exp(const Matrix& x, const Matrix& v) const override;
  Matrix transport(const Matrix& x, const Matrix& v, const Matrix& u) const override;
  Matrix inverse_transport(const Matrix& x, const Matrix& v,
                           const Matrix& w) const override;
  double feasibility_residual(const Matrix& x) const override;
  Matrix random_point(CounterRng& rng) const override;
  using Manifold::random_point;

 private:
  Index rows_;
  Index cols_;
};

/// Unit sphere Sp(r) in R^r (column vectors). Retraction is exp.
class Sphere final : public Manifold {
 public:
  explicit Sphere(Index r);

  ManifoldKind kind() const override { return ManifoldKind::Sphere; }
  std::string name() const override;
  Index dim() const override { return r_ - 1; }
  Index rows() const override { return r_; }
  Index cols() const override { return 1; }
  Capabilities capabilities() const override { return {true, true, true}; }

  Matrix project(const Matrix& x, const Matrix& w) const override;
  Matrix retract(const Matrix& x, const Matrix& v) const override;
  Matrix exp(const Matrix& x, const Matrix& v) const override;
  Matrix transport(const Matrix& x, const Matrix& v, const Matrix& u) const override;
  Matrix inverse_transport(const Matrix& x, const Matrix& v,
                           const Matrix& w) const override;
  double feasibility_residual(const Matrix& x) const override;
  Matrix random_point(CounterRng& rng) const override;
  using Manifold::random_point;

 private:
  Index r_;
};

/// Oblique manifold Ob(r, t): r x t matrices with unit-norm rows, i.e. a
/// product of r copies of Sp(t). All maps act row by row.
class Oblique final : public Manifold {
 public:
  Oblique(Index r, Index t);

  ManifoldKind kind() const override { return ManifoldKind::Oblique; }
  std::string name() const override;
  Index dim() const override { return r_ * (t_ - 1); }
  Index rows() const override { return r_; }
  Index cols() const override { return t_; }
  Capabilities capabilities() const override { return {true, true, true}; }

  Matrix project(const Matrix& x, const Matrix& w) const override;
  Matrix retract(const Matrix& x, const Matrix& v) const override;
  Matrix exp(const Matrix& x, const Matrix& v) const override;
  Matrix transport(const Matrix& x, const Matrix& v, const Matrix& u) const override;
  Matrix inverse_transport(const Matrix& x, const Matrix& v,
                           const Matrix& w) const override;
  double feasibility_residual(const Matrix& x) const override;
  Matrix random_point(CounterRng& rng) const override;
  using Manifold::random_point;

 private:
  Index r_;
  Index t_;
};

/// Stiefel manifold St(r, t) = {X in R^{r x t} : X^T X = I} with the
/// embedded metric and the polar retraction (second order). No exp or
/// parallel transport is offered.
class Stiefel final : public Manifold {
 public:
  Stiefel(Index r, Index t);

  ManifoldKind kind() const override { return ManifoldKind::Stiefel; }
  std::string name() const override;
  Index dim() const override { return r_ * t_ - t_ * (t_ + 1) / 2; }
  Index rows() const override { return r_; }
  Index cols() const override { return t_; }
  Capabilities capabilities() const override { return {false, false, true}; }

  Matrix project(const Matrix& x, const Matrix& w) const override;
  Matrix retract(const Matrix& x, const Matrix& v) const override;
  double feasibility_residual(const Matrix& x) const override;
  Matrix random_point(CounterRng& rng) const override;
  using Manifold::random_point;

 private:
  Index r_;
  Index t_;
};

/// Grassmann manifold Gr(r, t) represented by orthonormal r x t matrices.
/// Tangent vectors are horizontal lifts (X^T V = 0). Retraction is exp;
/// exp and transport use the thin SVD of the velocity.
class Grassmann final : public Manifold {
 public:
  Grassmann(Index r, Index t);

  ManifoldKind kind() const override { return ManifoldKind::Grassmann; }
  std::string name() const override;
  Index dim() const override { return t_ * (r_ - t_); }
  Index rows() const override { return r_; }
  Index cols() const override { return t_; }
  Capabilities capabilities() const override { return {true, true, true}; }

  Matrix project(const Matrix& x, const Matrix& w) const override;
  Matrix retract(const Matrix& x, const Matrix& v) const override;
  Matrix exp(const Matrix& x, const Matrix& v) const override;
  Matrix transport(const Matrix& x, const Matrix& v, const Matrix& u) const override;
  Matrix inverse_transport(const Matrix& x, const Matrix& v,
                           const Matrix& w) const override;
  double feasibility_residual(const Matrix& x) const override;
  Matrix random_point(CounterRng& rng) const override;
  using Manifold::random_point;

 private:
  Index r_;
  Index t_;
};

/// Finite product M_1 x ... x M_m. Ambient coordinates are the column-major
/// vectorizations of the factors stacked into one column; block(i, z) views
/// factor i.
class Product final : public Manifold {
 public:
  explicit Product(std::vector<ManifoldPtr> factors);

  ManifoldKind kind() const override { return ManifoldKind::Product; }
  std::string name() const override;
  Index dim() const override { return dim_; }
  Index rows() const override { return size_; }
  Index cols() const override { return 1; }
  Capabilities capabilities() const override { return caps_; }

  const std::vector<ManifoldPtr>& factors() const { return factors_; }
  /// Factor i's block of a stacked ambient matrix, reshaped to its shape.
  Matrix block(std::size_t i, const Matrix& z) const;
  /// Inverse of block(): stack factor matrices into one column.
  Matrix stack(const std::vector<Matrix>& blocks) const;

  Matrix project(const Matrix& x, const Matrix& w) const override;
  double inner(const Matrix& x, const Matrix& u, const Matrix& v) const override;
  Matrix retract(const Matrix& x, const Matrix& v) const override;
  Matrix exp(const Matrix& x, const Matrix& v) const override;
  Matrix transport(const Matrix& x, const Matrix& v, const Matrix& u) const override;
  Matrix inverse_transport(const Matrix& x, const Matrix& v,
                           const Matrix& w) const override;
  double feasibility_residual(const Matrix& x) const override;
  Matrix random_point(CounterRng& rng) const override;
  using Manifold::random_point;

 private:
  std::vector<ManifoldPtr> factors_;
  std::vector<Index> offsets_;
  Index size_ = 0;
  Index dim_ = 0;
  Capabilities caps_;
};

// ---------------------------------------------------------------------------
// Value types with base-point bookkeeping.

struct Point {
  ManifoldPtr manifold;
  Matrix coords;
};

struct TangentVector {
  Point base;
  Matrix coords;
};

struct TangentBasis {
  Point base;
  std::vector<Matrix> vectors;

  Index size() const { return static_cast<Index>(vectors.size()); }
  /// sum_i c_i e_i
  Matrix to_ambient(const Vector& c) const;
  /// (<e_i, w>)_i
  Vector to_coords(const Matrix& w) const;
};

/// Feasibility check on construction: residual must be <= 1e-10.
Point make_point(ManifoldPtr m, Matrix coords);

bool same_point(const Point& a, const Point& b);

TangentVector project_tangent(const Point& p, const Matrix& w);
double inner(const Point& p, const TangentVector& u, const TangentVector& v);
double norm(const Point& p, const TangentVector& u);
Point retract(const Point& p, const TangentVector& v);
Point exp(const Point& p, const TangentVector& v);
/// Returns a tangent vector based at exp(p, v).
TangentVector transport(const Point& p, const TangentVector& v,
                        const TangentVector& u);
TangentVector inverse_transport(const Point& p, const TangentVector& v,
                                const TangentVector& w);
TangentBasis tangent_basis(const Point& p);
Point random_point(ManifoldPtr m, std::uint64_t seed);
TangentVector random_tangent(const Point& p, std::uint64_t seed);

}  // namespace rarc
