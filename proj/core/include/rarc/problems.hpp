#pragma once

#include "rarc/manifolds.hpp"
#include "rarc/objective.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace rarc {

/// A seeded benchmark objective. Problems that are naturally maximized are
/// stored as the minimization of the negated cost (`negated` = true).
struct ProblemInstance {
  std::string name;
  ManifoldPtr manifold;
  Objective objective;
  /// Global optimal value computed independently of the solver; empty when
  /// no closed form exists.
  std::function<double()> optimum_oracle;
  std::uint64_t seed = 0;
  bool negated = false;
};

/// f(x) = -1/2 x^T A x on Sp(r), A = (M + M^T)/2 with M standard normal.
ProblemInstance make_top_eigenvalue(Index r, std::uint64_t seed);
ProblemInstance make_top_eigenvalue(const Matrix& a, std::uint64_t seed = 0);

/// f(X) = -1/2 Tr(X^T A X) on Gr(r, t), r > t >= 1.
ProblemInstance make_dominant_subspace(Index r, Index t, std::uint64_t seed);
ProblemInstance make_dominant_subspace(const Matrix& a, Index t, std::uint64_t seed = 0);

/// f(X) = 1/2 Tr(X^T A X) on Ob(r, t). No optimum oracle.
ProblemInstance make_elliptope(Index r, Index t, std::uint64_t seed);
ProblemInstance make_elliptope(const Matrix& a, Index t, std::uint64_t seed = 0);

/// f(U, V) = -Tr(U^T A V N), N = diag(t, ..., 1), on St(r, t) x St(s, t).
/// A is r x s standard normal.
ProblemInstance make_truncated_svd(Index r, Index s, Index t, std::uint64_t seed);
ProblemInstance make_truncated_svd(const Matrix& a, Index t, std::uint64_t seed = 0);

/// Layer weights of the swish composite: y_{i+1} = swish(A_i y_i + b_i).
struct SwishLayers {
  std::array<Matrix, 3> a;
  std::array<Vector, 3> b;
};

/// f(x) = |f3(f2(f1(x)))|_2 / r4 on Sp(r1) with swish(z) = z / (1 + e^{-z}).
/// Value only; no derivatives are supplied.
ProblemInstance make_swish_composite(const std::array<Index, 4>& dims,
                                     std::uint64_t seed);
ProblemInstance make_swish_composite(const SwishLayers& layers, std::uint64_t seed = 0);

}  // namespace rarc
