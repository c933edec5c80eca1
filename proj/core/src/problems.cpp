#include "rarc/problems.hpp"

#include "rarc/error.hpp"
#include "rarc/random.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace rarc {

namespace {

Matrix symmetric_gaussian(Index r, CounterRng& rng) {
  const Matrix m = gaussian_matrix(r, r, rng);
  return 0.5 * (m + m.transpose());
}

void require_symmetric(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(who) + ": A must be square");
  if (!all_finite(a)) throw DomainError(std::string(who) + ": A must be finite");
  if (max_abs(a - a.transpose()) > 1e-12 * (1.0 + max_abs(a))) {
    throw DomainError(std::string(who) + ": A must be symmetric");
  }
}

Matrix stiefel_project(const Matrix& x, const Matrix& w) {
  const Matrix xtw = x.transpose() * w;
  return w - x * (0.5 * (xtw + xtw.transpose()));
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

// --- top eigenvalue ---------------------------------------------------------

ProblemInstance make_top_eigenvalue(const Matrix& a_in, std::uint64_t seed) {
  require_symmetric(a_in, "make_top_eigenvalue");
  if (a_in.rows() < 2) throw DomainError("make_top_eigenvalue: r must be >= 2");
  auto a = std::make_shared<const Matrix>(a_in);
  auto sp = std::make_shared<const Sphere>(a_in.rows());

  Objective obj(
      [a](const Matrix& x) { return -0.5 * (x.transpose() * (*a) * x)(0, 0); },
      [a](const Matrix& x) -> Matrix {
        const Matrix ax = (*a) * x;
        return -(ax - x * (x.transpose() * ax));
      },
      [a](const Matrix& x, const Matrix& u) -> Matrix {
        const Matrix au = (*a) * u;
        const double xax = (x.transpose() * (*a) * x)(0, 0);
        return -(au - x * (x.transpose() * au)) + xax * u;
      });
  return ProblemInstance{
      "top-eig", sp, std::move(obj),
      [a] { return -0.5 * sym_eig(*a).eigenvalues.maxCoeff(); }, seed, true};
}

ProblemInstance make_top_eigenvalue(Index r, std::uint64_t seed) {
  if (r < 2) throw DomainError("make_top_eigenvalue: r must be >= 2");
  CounterRng rng(seed, Stream::kInstance);
  return make_top_eigenvalue(symmetric_gaussian(r, rng), seed);
}

// --- dominant invariant subspace -------------------------------------------

ProblemInstance make_dominant_subspace(const Matrix& a_in, Index t, std::uint64_t seed) {
  require_symmetric(a_in, "make_dominant_subspace");
  const Index r = a_in.rows();
  if (!(t >= 1 && t < r)) {
    throw DomainError("make_dominant_subspace: need r > t >= 1, got r=" +
                      std::to_string(r) + " t=" + std::to_string(t));
  }
  auto a = std::make_shared<const Matrix>(a_in);
  auto gr = std::make_shared<const Grassmann>(r, t);

  Objective obj(
      [a](const Matrix& x) { return -0.5 * (x.transpose() * (*a) * x).trace(); },
      [a](const Matrix& x) -> Matrix {
        const Matrix ax = (*a) * x;
        return -(ax - x * (x.transpose() * ax));
      },
      [a](const Matrix& x, const Matrix& v) -> Matrix {
        const Matrix av = (*a) * v;
        const Matrix xax = x.transpose() * (*a) * x;
        return -(av - x * (x.transpose() * av)) + v * xax;
      });
  return ProblemInstance{"dominant-subspace", gr, std::move(obj),
                         [a, t] {
                           const Vector ev = sym_eig(*a).eigenvalues;
                           return -0.5 * ev.tail(t).sum();
                         },
                         seed, true};
}

ProblemInstance make_dominant_subspace(Index r, Index t, std::uint64_t seed) {
  if (!(t >= 1 && t < r)) {
    throw DomainError("make_dominant_subspace: need r > t >= 1, got r=" +
                      std::to_string(r) + " t=" + std::to_string(t));
  }
  CounterRng rng(seed, Stream::kInstance);
  return make_dominant_subspace(symmetric_gaussian(r, rng), t, seed);
}

// --- elliptope --------------------------------------------------------------

ProblemInstance make_elliptope(const Matrix& a_in, Index t, std::uint64_t seed) {
  require_symmetric(a_in, "make_elliptope");
  const Index r = a_in.rows();
  if (r < 2 || t < 2) throw DomainError("make_elliptope: need r >= 2 and t >= 2");
  auto a = std::make_shared<const Matrix>(a_in);
  auto ob = std::make_shared<const Oblique>(r, t);

  Objective obj(
      [a](const Matrix& x) { return 0.5 * (x.transpose() * (*a) * x).trace(); },
      [a](const Matrix& x) -> Matrix {
        const Matrix ax = (*a) * x;
        const Vector d = (x.array() * ax.array()).rowwise().sum();
        return ax - d.asDiagonal() * x;
      },
      [a](const Matrix& x, const Matrix& u) -> Matrix {
        const Matrix ax = (*a) * x;
        const Matrix au = (*a) * u;
        const Vector d = (x.array() * ax.array()).rowwise().sum();
        const Vector du = (x.array() * au.array()).rowwise().sum();
        return au - du.asDiagonal() * x - d.asDiagonal() * u;
      });
  return ProblemInstance{"elliptope", ob, std::move(obj), {}, seed, false};
}

ProblemInstance make_elliptope(Index r, Index t, std::uint64_t seed) {
  if (r < 2 || t < 2) throw DomainError("make_elliptope: need r >= 2 and t >= 2");
  CounterRng rng(seed, Stream::kInstance);
  return make_elliptope(symmetric_gaussian(r, rng), t, seed);
}

// --- truncated SVD ----------------------------------------------------------

ProblemInstance make_truncated_svd(const Matrix& a_in, Index t, std::uint64_t seed) {
  const Index r = a_in.rows();
  const Index s = a_in.cols();
  if (!(t >= 1 && r >= t && s >= t)) {
    throw DomainError("make_truncated_svd: need r, s >= t >= 1");
  }
  if (!all_finite(a_in)) throw DomainError("make_truncated_svd: A must be finite");
  auto a = std::make_shared<const Matrix>(a_in);
  auto prod = std::make_shared<const Product>(std::vector<ManifoldPtr>{
      std::make_shared<const Stiefel>(r, t), std::make_shared<const Stiefel>(s, t)});
  Vector nd(t);
  for (Index i = 0; i < t; ++i) nd(i) = static_cast<double>(t - i);
  const Matrix n = nd.asDiagonal();

  Objective obj(
      [a, prod, n](const Matrix& z) {
        const Matrix u = prod->block(0, z);
        const Matrix v = prod->block(1, z);
        return -(u.transpose() * (*a) * v * n).trace();
      },
      [a, prod, n](const Matrix& z) -> Matrix {
        const Matrix u = prod->block(0, z);
        const Matrix v = prod->block(1, z);
        return prod->stack({stiefel_project(u, -(*a) * v * n),
                            stiefel_project(v, -a->transpose() * u * n)});
      },
      [a, prod, n](const Matrix& z, const Matrix& xi) -> Matrix {
        const Matrix u = prod->block(0, z);
        const Matrix v = prod->block(1, z);
        const Matrix xu = prod->block(0, xi);
        const Matrix xv = prod->block(1, xi);
        const Matrix gu = -(*a) * v * n;
        const Matrix gv = -a->transpose() * u * n;
        const Matrix hu = -(*a) * xv * n - xu * sym(u.transpose() * gu);
        const Matrix hv = -a->transpose() * xu * n - xv * sym(v.transpose() * gv);
        return prod->stack({stiefel_project(u, hu), stiefel_project(v, hv)});
      });
  return ProblemInstance{"truncated-svd", prod, std::move(obj),
                         [a, t] {
                           const Vector sv = svd_thin(*a).s;
                           double acc = 0.0;
                           for (Index i = 0; i < t; ++i) {
                             acc += static_cast<double>(t - i) * sv(i);
                           }
                           return -acc;
                         },
                         seed, true};
}

ProblemInstance make_truncated_svd(Index r, Index s, Index t, std::uint64_t seed) {
  if (!(t >= 1 && r >= t && s >= t)) {
    throw DomainError("make_truncated_svd: need r, s >= t >= 1");
  }
  CounterRng rng(seed, Stream::kInstance);
  return make_truncated_svd(gaussian_matrix(r, s, rng), t, seed);
}

// --- swish composite --------------------------------------------------------

namespace {

double swish(double z) { return z / (1.0 + std::exp(-z)); }

}  // namespace

ProblemInstance make_swish_composite(const SwishLayers& layers_in, std::uint64_t seed) {
  const Index r1 = layers_in.a[0].cols();
  if (r1 < 2) throw DomainError("make_swish_composite: r1 must be >= 2 for a sphere");
  for (std::size_t i = 0; i < 3; ++i) {
    const Matrix& ai = layers_in.a[i];
    if (ai.rows() < 1 || ai.rows() != layers_in.b[i].size()) {
      throw DimensionError("make_swish_composite: layer " + std::to_string(i + 1) +
                           " bias does not match its weight rows");
    }
    if (i > 0 && ai.cols() != layers_in.a[i - 1].rows()) {
      throw DimensionError("make_swish_composite: layer " + std::to_string(i + 1) +
                           " input size mismatch");
    }
  }
  auto layers = std::make_shared<const SwishLayers>(layers_in);
  const double r4 = static_cast<double>(layers_in.a[2].rows());
  auto sp = std::make_shared<const Sphere>(r1);

  Objective obj([layers, r4](const Matrix& x) {
    Vector y = x.col(0);
    for (std::size_t i = 0; i < 3; ++i) {
      y = (layers->a[i] * y + layers->b[i]).unaryExpr(&swish);
    }
    return y.norm() / r4;
  });
  return ProblemInstance{"swish", sp, std::move(obj), {}, seed, false};
}

ProblemInstance make_swish_composite(const std::array<Index, 4>& dims,
                                     std::uint64_t seed) {
  for (Index d : dims) {
    if (d < 1) throw DomainError("make_swish_composite: all dims must be >= 1");
  }
  if (dims[0] < 2) throw DomainError("make_swish_composite: r1 must be >= 2 for a sphere");
  CounterRng rng(seed, Stream::kInstance);
  SwishLayers layers;
  for (std::size_t i = 0; i < 3; ++i) {
    layers.a[i] = gaussian_matrix(dims[i + 1], dims[i], rng);
    layers.b[i] = gaussian_matrix(dims[i + 1], 1, rng);
  }
  return make_swish_composite(layers, seed);
}

}  // namespace rarc
