#pragma once

#include "rarc/manifolds.hpp"
#include "rarc/numkernel.hpp"
#include "rarc/objective.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace rarc {

enum class GradientVariant { FD, Exact };

/// How B is built for a trial.
///  Pullback  - second differences of f o R_p (needs a second-order retraction)
///  Transport - second differences through exp and parallel transport
///  GradCalls - forward differences of exact gradients moved back to T_p M
///  Exact     - the objective's Hessian in basis coordinates
enum class HessianVariant { Pullback, Transport, GradCalls, Exact };

std::string_view to_string(GradientVariant v);
std::string_view to_string(HessianVariant v);

inline constexpr double kFdStepFloor = 6.0e-6;
inline constexpr double kFdStepCeil = 1.0e3;
/// Floor for the step of the value-only Hessians (pullback, transport). Their
/// second differences carry rounding noise ~ eps |f| / h^2, so the useful
/// floor is eps^(1/4) rather than the cube root that suits the gradient.
inline constexpr double kValueHessianStepFloor = 1.22e-4;

struct FdStep {
  double h = 0.0;
  bool clamped = false;
};

/// h = |v_{k-1}| / (2^{alpha-1} sigma_k), clamped to [6e-6, 1e3].
/// Throws DomainError when sigma_k <= 0.
FdStep fd_step(double v_prev_norm, double sigma_k, int alpha);

/// Step actually used by a Hessian variant for the trial step h.
double hessian_step(HessianVariant variant, double h);

/// One inner-loop trial's derivative surrogates, in basis coordinates.
struct TrialApproximation {
  int alpha = 0;
  double h = 0.0;
  bool h_was_clamped = false;
  Vector g;
  Matrix b;
  std::size_t f_evals_used = 0;
  std::size_t grad_evals_used = 0;
};

struct FdGradient {
  Vector g;
  /// f(R_p(h e_i)), reusable by fd_hessian_pullback at the same h.
  std::vector<double> forward;
};

/// Central differences of the pullback: 2n objective evaluations.
FdGradient fd_gradient_samples(const Objective& obj, const Point& p,
                               const TangentBasis& basis, double h);
Vector fd_gradient(const Objective& obj, const Point& p, const TangentBasis& basis,
                   double h);

/// Case-1 second differences of f o R_p.
///
/// A_ij = [f^(h e_i + h e_j) - f^(h e_i) - f^(h e_j) + f(p)] / h^2. The
/// formula is symmetric in (i, j), so only i <= j is evaluated. Without
/// `forward` this costs n(n-1)/2 + 2n evaluations; passing the forward samples
/// of fd_gradient_samples at the same h saves n of them.
Matrix fd_hessian_pullback(const Objective& obj, const Point& p,
                           const TangentBasis& basis, double h, double f_at_p,
                           std::span<const double> forward = {});

/// Case-2 second differences through q_i = exp_p(h e_i) and parallel
/// transport; n^2 + n evaluations. Returns (A + A^T)/2.
Matrix fd_hessian_transport(const Objective& obj, const Point& p,
                            const TangentBasis& basis, double h, double f_at_p);

/// A e_i = [G(p, h e_i) - grad f(p)] / h with G(p, v) = P_v^{-1} grad f(exp_p v)
/// when transport exists, otherwise the tangent projection at p of
/// grad f(R_p v). n + 1 gradient evaluations. Returns (A + A^T)/2.
Matrix fd_hessian_gradcalls(const Objective& obj, const Point& p,
                            const TangentBasis& basis, double h);

/// Exact Riemannian gradient / Hessian expressed in the basis.
Vector exact_gradient_coords(const Objective& obj, const Point& p,
                             const TangentBasis& basis);
Matrix exact_hessian_coords(const Objective& obj, const Point& p,
                            const TangentBasis& basis);

}  // namespace rarc
