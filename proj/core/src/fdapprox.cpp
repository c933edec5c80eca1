#include "rarc/fdapprox.hpp"

#include "rarc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rarc {

std::string_view to_string(GradientVariant v) {
  switch (v) {
    case GradientVariant::FD: return "fd";
    case GradientVariant::Exact: return "exact";
  }
  return "?";
}

std::string_view to_string(HessianVariant v) {
  switch (v) {
    case HessianVariant::Pullback: return "pullback";
    case HessianVariant::Transport: return "transport";
    case HessianVariant::GradCalls: return "gradcalls";
    case HessianVariant::Exact: return "exact";
  }
  return "?";
}

FdStep fd_step(double v_prev_norm, double sigma_k, int alpha) {
  if (!(sigma_k > 0.0)) {
    throw DomainError("fd_step: sigma_k must be > 0, got " + std::to_string(sigma_k));
  }
  if (alpha < 0) throw DomainError("fd_step: alpha must be >= 0");
  if (!(v_prev_norm >= 0.0)) throw DomainError("fd_step: |v_prev| must be >= 0");
  const double raw = v_prev_norm / std::ldexp(sigma_k, alpha - 1);
  if (raw < kFdStepFloor) return {kFdStepFloor, true};
  if (raw > kFdStepCeil) return {kFdStepCeil, true};
  return {raw, false};
}

double hessian_step(HessianVariant variant, double h) {
  if (variant == HessianVariant::Pullback || variant == HessianVariant::Transport) {
    return std::max(h, kValueHessianStepFloor);
  }
  return h;
}

namespace {

void check_inputs(const Point& p, const TangentBasis& basis, double h, const char* op) {
  if (!(h > 0.0)) throw DomainError(std::string(op) + ": h must be > 0");
  if (!same_point(p, basis.base)) {
    throw UsageError(std::string(op) + ": basis is not attached to p");
  }
}

const Matrix& e(const TangentBasis& basis, Index i) {
  return basis.vectors[static_cast<std::size_t>(i)];
}

}  // namespace

FdGradient fd_gradient_samples(const Objective& obj, const Point& p,
                               const TangentBasis& basis, double h) {
  check_inputs(p, basis, h, "fd_gradient");
  const Manifold& m = *p.manifold;
  const Index n = basis.size();
  FdGradient out{Vector(n), std::vector<double>(static_cast<std::size_t>(n))};
  for (Index i = 0; i < n; ++i) {
    const double fp = obj.value(m.retract(p.coords, h * e(basis, i)));
    const double fm = obj.value(m.retract(p.coords, -h * e(basis, i)));
    out.forward[static_cast<std::size_t>(i)] = fp;
    out.g(i) = (fp - fm) / (2.0 * h);
  }
  return out;
}

Vector fd_gradient(const Objective& obj, const Point& p, const TangentBasis& basis,
                   double h) {
  return fd_gradient_samples(obj, p, basis, h).g;
}

Matrix fd_hessian_pullback(const Objective& obj, const Point& p,
                           const TangentBasis& basis, double h, double f_at_p,
                           std::span<const double> forward) {
  check_inputs(p, basis, h, "fd_hessian_pullback");
  const Manifold& m = *p.manifold;
  if (!m.capabilities().retraction_is_second_order) {
    throw UnsupportedOperation("fd_hessian_pullback: retraction on " + m.name() +
                               " is not second order");
  }
  const Index n = basis.size();
  if (!forward.empty() && static_cast<Index>(forward.size()) != n) {
    throw DimensionError("fd_hessian_pullback: forward sample count != n");
  }
  std::vector<double> single(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    single[static_cast<std::size_t>(i)] =
        forward.empty() ? obj.value(m.retract(p.coords, h * e(basis, i)))
                        : forward[static_cast<std::size_t>(i)];
  }
  const double h2 = h * h;
  Matrix b(n, n);
  for (Index i = 0; i < n; ++i) {
    const double fi = single[static_cast<std::size_t>(i)];
    for (Index j = i; j < n; ++j) {
      const double fj = single[static_cast<std::size_t>(j)];
      const double fij = obj.value(m.retract(p.coords, h * (e(basis, i) + e(basis, j))));
      b(i, j) = (fij - fi - fj + f_at_p) / h2;
      b(j, i) = b(i, j);
    }
  }
  return b;
}

Matrix fd_hessian_transport(const Objective& obj, const Point& p,
                            const TangentBasis& basis, double h, double f_at_p) {
  check_inputs(p, basis, h, "fd_hessian_transport");
  const Manifold& m = *p.manifold;
  const Capabilities caps = m.capabilities();
  if (!caps.has_exp || !caps.has_transport) {
    throw UnsupportedOperation("fd_hessian_transport: " + m.name() +
                               " lacks exp or parallel transport");
  }
  const Index n = basis.size();
  std::vector<Matrix> q(static_cast<std::size_t>(n));
  std::vector<double> fq(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    q[static_cast<std::size_t>(i)] = m.exp(p.coords, h * e(basis, i));
    fq[static_cast<std::size_t>(i)] = obj.value(q[static_cast<std::size_t>(i)]);
  }
  const double h2 = h * h;
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    const Matrix vi = h * e(basis, i);
    const Matrix& qi = q[static_cast<std::size_t>(i)];
    for (Index j = 0; j < n; ++j) {
      const Matrix moved = m.transport(p.coords, vi, h * e(basis, j));
      const double fij = obj.value(m.exp(qi, moved));
      // Row i holds <A e_i, e_j>.
      a(i, j) = (fij - fq[static_cast<std::size_t>(i)] -
                 fq[static_cast<std::size_t>(j)] + f_at_p) / h2;
    }
  }
  return 0.5 * (a + a.transpose());
}

Matrix fd_hessian_gradcalls(const Objective& obj, const Point& p,
                            const TangentBasis& basis, double h) {
  check_inputs(p, basis, h, "fd_hessian_gradcalls");
  if (!obj.has_gradient()) {
    throw CapabilityError("fd_hessian_gradcalls: objective has no exact gradient");
  }
  const Manifold& m = *p.manifold;
  const Capabilities caps = m.capabilities();
  const bool via_transport = caps.has_exp && caps.has_transport;
  if (!via_transport && !caps.retraction_is_second_order) {
    throw UnsupportedOperation("fd_hessian_gradcalls: " + m.name() +
                               " has neither transport nor a second-order retraction");
  }
  const Index n = basis.size();
  const Matrix grad_p = obj.gradient(p.coords);
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    const Matrix v = h * e(basis, i);
    Matrix moved;
    if (via_transport) {
      moved = m.inverse_transport(p.coords, v, obj.gradient(m.exp(p.coords, v)));
    } else {
      moved = m.project(p.coords, obj.gradient(m.retract(p.coords, v)));
    }
    // Column i holds the coordinates of A e_i.
    a.col(i) = basis.to_coords((moved - grad_p) / h);
  }
  return 0.5 * (a + a.transpose());
}

Vector exact_gradient_coords(const Objective& obj, const Point& p,
                             const TangentBasis& basis) {
  if (!same_point(p, basis.base)) {
    throw UsageError("exact_gradient_coords: basis is not attached to p");
  }
  return basis.to_coords(obj.gradient(p.coords));
}

Matrix exact_hessian_coords(const Objective& obj, const Point& p,
                            const TangentBasis& basis) {
  if (!same_point(p, basis.base)) {
    throw UsageError("exact_hessian_coords: basis is not attached to p");
  }
  const Index n = basis.size();
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    a.col(j) = basis.to_coords(obj.hessian(p.coords, e(basis, j)));
  }
  return 0.5 * (a + a.transpose());
}

}  // namespace rarc
