#pragma once

#include "rarc/model.hpp"
#include "rarc/numkernel.hpp"

#include <string_view>

namespace rarc {

enum class SubproblemStatus { GlobalSecular, CGFallback };

std::string_view to_string(SubproblemStatus s);

/// Approximate minimizer of a cubic model satisfying
///   m(v) <= f0   and   |grad m(v)| <= theta |v|^2.
struct SubproblemSolution {
  Vector v;
  double model_value = 0.0;
  double grad_norm = 0.0;
  /// (sigma_cub / 2) |v|; the secular multiplier for GlobalSecular returns.
  double multiplier = 0.0;
  /// Smallest eigenvalue of B (from the factorization used by the solver).
  double lambda_min_b = 0.0;
  SubproblemStatus status = SubproblemStatus::GlobalSecular;
  int iterations = 0;
};

struct SecularResult {
  double lambda = 0.0;
  Vector w;  ///< minimizer in the eigenbasis of B
  bool hard_case = false;
  int iterations = 0;
};

/// Global minimizer of the cubic model in the eigenbasis of B.
///
/// Solves (diag(eigs) + lambda I) w = -g_hat with lambda = (sigma_cub/2)|w|
/// and lambda >= max(0, -eigs_min) by bracketed Newton with bisection on
///   phi(lambda) = |w(lambda)| - 2 lambda / sigma_cub.
/// In the hard case (g_hat orthogonal to the bottom eigenspace and phi <= 0
/// at the pole) the bottom eigenvector is added with a nonnegative weight.
/// Throws NumericalError if the root cannot be bracketed or refined within
/// 200 iterations.
SecularResult secular_solve(const Vector& eigs, const Vector& g_hat, double sigma_cub);

/// Nonlinear conjugate gradients (Polak-Ribiere+) on the model, started from
/// v_init (or from 0 when m(v_init) > f0). Stops once the model conditions
/// hold or `budget` iterations are spent; never returns a point with a model
/// value above min(f0, m(v_init)).
SubproblemSolution cg_fallback(const CubicModel& m, double theta, const Vector& v_init,
                               int budget);

/// Secular solve first; CG fallback when the secular point misses the model
/// conditions. Throws SubsolverFailure when both fail.
SubproblemSolution solve_cubic(const CubicModel& m, double theta);

/// lambda_min(B) >= -(sigma_half_v + theta_v_prev)
bool check_second_order(const Matrix& b, double sigma_half_v, double theta_v_prev);

/// True when `sol` meets both model conditions for `theta`. With theta == 0
/// the stationarity test is relaxed to a rounding-level residual.
bool meets_model_conditions(const CubicModel& m, const Vector& v, double theta);

}  // namespace rarc
