#include "geometry_checks.hpp"
#include "oracles.hpp"
#include "rarc/error.hpp"
#include "rarc/manifolds.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace rarc;
using rarc::testing::basis_orthonormality_defect;
using rarc::testing::retraction_first_order;
using rarc::testing::retraction_tangential_acceleration;
using rarc::testing::transport_isometry_defect;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix unit(Index r, Index i) {
  Matrix e = Matrix::Zero(r, 1);
  e(i) = 1.0;
  return e;
}

std::vector<ManifoldPtr> all_manifolds() {
  return {std::make_shared<const Euclidean>(3, 2),
          std::make_shared<const Sphere>(5),
          std::make_shared<const Oblique>(4, 3),
          std::make_shared<const Stiefel>(5, 2),
          std::make_shared<const Grassmann>(6, 2),
          std::make_shared<const Product>(std::vector<ManifoldPtr>{
              std::make_shared<const Stiefel>(4, 2), std::make_shared<const Sphere>(3)})};
}

}  // namespace

TEST(Sphere, ProjectionExamples) {
  Sphere s(3);
  EXPECT_EQ(s.project(unit(3, 0), unit(3, 0)), Matrix::Zero(3, 1));
  EXPECT_EQ(s.project(unit(3, 0), unit(3, 1)), unit(3, 1));
}

TEST(Sphere, InnerExamples) {
  auto s = std::make_shared<const Sphere>(3);
  const Point p = make_point(s, unit(3, 0));
  const TangentVector e2{p, unit(3, 1)};
  const TangentVector e3{p, unit(3, 2)};
  EXPECT_DOUBLE_EQ(inner(p, e2, e2), 1.0);
  EXPECT_DOUBLE_EQ(inner(p, e2, e3), 0.0);
  const TangentVector u = random_tangent(p, 1);
  const TangentVector w = random_tangent(p, 2);
  const TangentVector u2{p, 2.0 * u.coords};
  EXPECT_NEAR(inner(p, u2, w), 2.0 * inner(p, u, w), 1e-15);
}

TEST(Sphere, ExpExamples) {
  Sphere s(3);
  const Matrix e1 = unit(3, 0), e2 = unit(3, 1);
  EXPECT_LE((s.retract(e1, (kPi / 2) * e2) - e2).norm(), 1e-15);
  EXPECT_LE((s.exp(e1, kPi * e2) + e1).norm(), 1e-15);
  EXPECT_LE((s.exp(e1, 2 * kPi * e2) - e1).norm(), 1e-15);
  EXPECT_EQ(s.retract(e1, Matrix::Zero(3, 1)), e1);
}

TEST(Sphere, TransportExamples) {
  Sphere s(3);
  const Matrix e1 = unit(3, 0), e2 = unit(3, 1), e3 = unit(3, 2);
  EXPECT_LE((s.transport(e1, (kPi / 2) * e2, e2) + e1).norm(), 1e-15);
  EXPECT_LE((s.transport(e1, (kPi / 2) * e2, e3) - e3).norm(), 1e-15);
  EXPECT_EQ(s.transport(e1, Matrix::Zero(3, 1), e3), e3);
  EXPECT_EQ(s.inverse_transport(e1, Matrix::Zero(3, 1), e3), e3);
}

TEST(Sphere, InverseTransportRoundTrip) {
  auto s = std::make_shared<const Sphere>(6);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Matrix x = s->random_point(seed);
    const Matrix v = 1.7 * s->random_tangent(x, seed);
    const Matrix u = s->random_tangent(x, seed + 100);
    const Matrix back = s->inverse_transport(x, v, s->transport(x, v, u));
    EXPECT_LE((back - u).norm(), 1e-14);
  }
}

TEST(Sphere, BasisAtE1) {
  Sphere s(3);
  const auto b = s.tangent_basis(unit(3, 0));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], unit(3, 1));
  EXPECT_EQ(b[1], unit(3, 2));
}

TEST(Oblique, BasisRowsAtIdentity) {
  Oblique ob(2, 2);
  const auto b = ob.tangent_basis(Matrix::Identity(2, 2));
  ASSERT_EQ(b.size(), 2u);
  for (const Matrix& e : b) {
    const int rows_used = (e.row(0).norm() > 0) + (e.row(1).norm() > 0);
    EXPECT_EQ(rows_used, 1);
  }
  EXPECT_NE(b[0].row(0).norm() > 0, b[1].row(0).norm() > 0);
}

TEST(Stiefel, ProjectionIdempotentAndSkew) {
  Stiefel st(4, 2);
  const Matrix x = st.random_point(3);
  CounterRng rng(3, 50);
  const Matrix w = gaussian_matrix(4, 2, rng);
  const Matrix v = st.project(x, w);
  EXPECT_LE(max_abs(st.project(x, v) - v), 1e-14);
  EXPECT_LE(max_abs(x.transpose() * v + v.transpose() * x), 1e-14);
}

TEST(Stiefel, BasisGram) {
  Stiefel st(4, 2);
  EXPECT_EQ(st.dim(), 5);
  const Matrix x = st.random_point(11);
  EXPECT_EQ(st.tangent_basis(x).size(), 5u);
  EXPECT_LE(basis_orthonormality_defect(st, x), 1e-12);
}

TEST(Stiefel, PolarRetractionFeasibleAndSecondOrder) {
  Stiefel st(3, 2);
  const Matrix x = Matrix::Identity(3, 2);
  const Matrix v = 0.3 * st.random_tangent(x, 4);
  EXPECT_LE(st.feasibility_residual(st.retract(x, v)), 1e-12);
  const double h = 1e-3;
  const Matrix d2 = (st.retract(x, h * v) - 2.0 * x + st.retract(x, -h * v)) / (h * h);
  EXPECT_LE(st.project(x, d2).norm(), 1e-4);
}

// The polar retraction agrees with the embedded-metric geodesic up to third
// order. The geodesic Y(h) = [X, V] exp(h [[A, -S], [I, A]]) [I; 0] exp(-h A),
// A = X^T V, S = V^T V, is evaluated with a matrix exponential.
TEST(Stiefel, PolarRetractionMatchesGeodesicToThirdOrder) {
  Stiefel st(6, 2);
  const Matrix x = st.random_point(8);
  const Matrix v = st.random_tangent(x, 9);
  const Matrix a = x.transpose() * v;
  Matrix gen(4, 4);
  gen << a, -(v.transpose() * v), Matrix::Identity(2, 2), a;
  Matrix xv(6, 4);
  xv << x, v;
  std::vector<double> hs = {1e-1, 5e-2, 2.5e-2, 1.25e-2}, errs;
  for (double h : hs) {
    const Matrix geo =
        xv * Matrix(h * gen).exp() * Matrix::Identity(4, 2) * Matrix(-h * a).exp();
    ASSERT_LE(st.feasibility_residual(geo), 1e-12);
    errs.push_back((st.retract(x, h * v) - geo).norm());
  }
  EXPECT_GE(rarc::testing::loglog_slope(hs, errs), 2.7);
}

TEST(Grassmann, ExpChainsAlongGeodesic) {
  Grassmann gr(4, 2);
  const Matrix x = gr.random_point(5);
  const Matrix v = gr.random_tangent(x, 6);
  const double a = 0.4, b = 0.7;
  const Matrix direct = gr.exp(x, (a + b) * v);
  const Matrix mid = gr.exp(x, a * v);
  const Matrix chained = gr.exp(mid, gr.transport(x, a * v, b * v));
  EXPECT_LE(gr.feasibility_residual(direct), 1e-12);
  EXPECT_LE(max_abs(direct * direct.transpose() - chained * chained.transpose()), 1e-8);
}

TEST(Grassmann, TransportIsometryTangencyAndInverse) {
  Grassmann gr(7, 3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Matrix x = gr.random_point(seed);
    const Matrix v = 1.3 * gr.random_tangent(x, seed);
    const Matrix u = gr.random_tangent(x, seed + 50);
    const Matrix w = gr.random_tangent(x, seed + 90);
    EXPECT_LE(transport_isometry_defect(gr, x, v, u, w), 1e-12);
    const Matrix y = gr.exp(x, v);
    const Matrix pu = gr.transport(x, v, u);
    EXPECT_LE(max_abs(y.transpose() * pu), 1e-12);
    EXPECT_LE(max_abs(gr.inverse_transport(x, v, pu) - u), 1e-12);
  }
}

TEST(Product, BlockwiseEqualsFactorwise) {
  auto st = std::make_shared<const Stiefel>(4, 2);
  auto sp = std::make_shared<const Sphere>(3);
  Product p({st, sp});
  EXPECT_EQ(p.dim(), st->dim() + sp->dim());
  EXPECT_EQ(p.name(), "St(4,2)xSp(3)");
  const Matrix z = p.random_point(3);
  CounterRng rng(3, 77);
  const Matrix w = gaussian_matrix(p.rows(), 1, rng);
  const Matrix v = p.project(z, w);
  EXPECT_EQ(p.block(0, v), st->project(p.block(0, z), p.block(0, w)));
  EXPECT_EQ(p.block(1, v), sp->project(p.block(1, z), p.block(1, w)));
  const Matrix r = p.retract(z, v);
  EXPECT_EQ(p.block(0, r), st->retract(p.block(0, z), p.block(0, v)));
  EXPECT_EQ(p.block(1, r), sp->retract(p.block(1, z), p.block(1, v)));
  EXPECT_EQ(p.inner(z, v, v), st->inner(p.block(0, z), p.block(0, v), p.block(0, v)) +
                                  sp->inner(p.block(1, z), p.block(1, v), p.block(1, v)));
  EXPECT_FALSE(p.capabilities().has_transport);
  EXPECT_THROW(p.exp(z, v), UnsupportedOperation);
}

TEST(Manifolds, DimensionsMatchBasisSize) {
  EXPECT_EQ(Sphere(7).dim(), 6);
  EXPECT_EQ(Oblique(4, 3).dim(), 8);
  EXPECT_EQ(Stiefel(5, 2).dim(), 7);
  EXPECT_EQ(Grassmann(6, 2).dim(), 8);
  for (const auto& m : all_manifolds()) {
    const Matrix x = m->random_point(1);
    EXPECT_EQ(static_cast<Index>(m->tangent_basis(x).size()), m->dim()) << m->name();
    EXPECT_LE(basis_orthonormality_defect(*m, x), 1e-12) << m->name();
    for (const Matrix& e : m->tangent_basis(x)) {
      EXPECT_LE(max_abs(m->project(x, e) - e), 1e-10) << m->name();
    }
  }
}

TEST(Manifolds, FeasibilityAfterRetractAndExp) {
  for (const auto& m : all_manifolds()) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const Matrix x = m->random_point(seed);
      ASSERT_LE(m->feasibility_residual(x), 1e-10) << m->name();
      CounterRng rng(seed, 31);
      const Matrix v = (10.0 * rng.uniform()) * m->random_tangent(x, seed);
      ASSERT_LE(m->feasibility_residual(m->retract(x, v)), 1e-10) << m->name();
      if (m->capabilities().has_exp) {
        ASSERT_LE(m->feasibility_residual(m->exp(x, v)), 1e-10) << m->name();
      }
      EXPECT_EQ(m->retract(x, Matrix::Zero(m->rows(), m->cols())), x);
    }
  }
}

TEST(Manifolds, RandomPointAndTangent) {
  Sphere s(9);
  EXPECT_EQ(s.random_point(4), s.random_point(4));
  EXPECT_NEAR(s.random_point(4).norm(), 1.0, 1e-14);
  for (const auto& m : all_manifolds()) {
    const Matrix x = m->random_point(2);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      EXPECT_NEAR(m->norm(x, m->random_tangent(x, seed)), 1.0, 1e-14);
    }
  }
}

TEST(Manifolds, RetractionOrderChecks) {
  for (const auto& m : all_manifolds()) {
    if (m->kind() == ManifoldKind::Euclidean) continue;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Matrix x = m->random_point(seed);
      const Matrix v = 2.0 * m->random_tangent(x, seed);
      const auto first = retraction_first_order(*m, x, v);
      EXPECT_GE(first.slope, 1.8) << m->name();
      EXPECT_LE(first.slope, 2.2) << m->name();
      const auto second = retraction_tangential_acceleration(*m, x, v);
      EXPECT_TRUE(second.at_rounding_floor || second.slope >= 1.8) << m->name();
    }
  }
}

// A retraction with a tangential quadratic term must fail the second-order
// check, so the check is not vacuous.
TEST(Manifolds, FirstOrderOnlyRetractionIsDetected) {
  class Skewed final : public Manifold {
   public:
    ManifoldKind kind() const override { return ManifoldKind::Sphere; }
    std::string name() const override { return "skewed"; }
    Index dim() const override { return base_.dim(); }
    Index rows() const override { return base_.rows(); }
    Index cols() const override { return 1; }
    Capabilities capabilities() const override { return {}; }
    Matrix project(const Matrix& x, const Matrix& w) const override {
      return base_.project(x, w);
    }
    Matrix retract(const Matrix& x, const Matrix& v) const override {
      Matrix y = x + v + v.squaredNorm() * base_.project(x, Matrix::Ones(rows(), 1));
      return y / y.norm();
    }
    double feasibility_residual(const Matrix& x) const override {
      return base_.feasibility_residual(x);
    }
    Matrix random_point(CounterRng& rng) const override { return base_.random_point(rng); }
    using Manifold::random_point;

   private:
    Sphere base_{4};
  } skewed;
  const Matrix x = skewed.random_point(1);
  const auto second = retraction_tangential_acceleration(skewed, x, skewed.random_tangent(x, 1));
  EXPECT_FALSE(second.at_rounding_floor);
  EXPECT_LT(second.slope, 1.8);
}

TEST(Manifolds, TransportIsometry) {
  for (const auto& m : all_manifolds()) {
    if (!m->capabilities().has_transport) continue;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Matrix x = m->random_point(seed);
      const Matrix v = 2.5 * m->random_tangent(x, seed);
      EXPECT_LE(transport_isometry_defect(*m, x, v, m->random_tangent(x, seed + 1),
                                          m->random_tangent(x, seed + 2)),
                1e-11)
          << m->name();
    }
  }
}

TEST(Manifolds, Errors) {
  EXPECT_THROW(Sphere(1), DomainError);
  EXPECT_THROW(Oblique(2, 1), DomainError);
  EXPECT_THROW(Stiefel(2, 3), DomainError);
  EXPECT_THROW(Grassmann(3, 3), DomainError);
  EXPECT_THROW(Product({}), DomainError);

  Sphere s(3);
  EXPECT_THROW(s.project(unit(3, 0), Matrix::Zero(2, 1)), DimensionError);
  Stiefel st(4, 2);
  const Matrix x = st.random_point(1);
  EXPECT_THROW(st.exp(x, Matrix::Zero(4, 2)), UnsupportedOperation);
  EXPECT_THROW(st.transport(x, Matrix::Zero(4, 2), Matrix::Zero(4, 2)), UnsupportedOperation);

  auto sp = std::make_shared<const Sphere>(3);
  EXPECT_THROW(make_point(sp, 2.0 * unit(3, 0)), DomainError);
  const Point p = make_point(sp, unit(3, 0));
  const Point q = make_point(sp, unit(3, 1));
  const TangentVector at_q{q, unit(3, 0)};
  EXPECT_THROW(inner(p, at_q, at_q), UsageError);
  EXPECT_THROW(retract(p, at_q), UsageError);
}

TEST(Manifolds, ValueTypeTransportLandsAtExp) {
  auto sp = std::make_shared<const Sphere>(4);
  const Point p = random_point(sp, 3);
  const TangentVector v = random_tangent(p, 4);
  const TangentVector u = random_tangent(p, 5);
  const TangentVector moved = transport(p, v, u);
  EXPECT_TRUE(same_point(moved.base, exp(p, v)));
  const TangentVector back = inverse_transport(p, v, moved);
  EXPECT_LE((back.coords - u.coords).norm(), 1e-14);
  EXPECT_THROW(inverse_transport(p, v, u), UsageError);
}
