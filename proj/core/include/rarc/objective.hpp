#pragma once

#include "rarc/numkernel.hpp"

#include <atomic>
#include <cstddef>
#include <functional>

namespace rarc {

/// A smooth cost on a manifold, given in ambient coordinates.
///
/// `value` is mandatory. The Riemannian gradient and Hessian are optional;
/// they enable the exact-derivative variants and the gradient-call Hessian.
/// Every call goes through a counter so evaluation budgets can be audited.
/// Counters are atomic; copying an Objective copies their current values.
class Objective {
 public:
  using ValueFn = std::function<double(const Matrix& x)>;
  /// Riemannian gradient at x, as an ambient tangent matrix.
  using GradientFn = std::function<Matrix(const Matrix& x)>;
  /// Riemannian Hessian at x applied to a tangent matrix v.
  using HessianFn = std::function<Matrix(const Matrix& x, const Matrix& v)>;

  explicit Objective(ValueFn f, GradientFn grad = {}, HessianFn hess = {});
  Objective(const Objective& other);
  Objective& operator=(const Objective& other);

  /// Throws EvaluationError (carrying x) if f(x) is not finite.
  double value(const Matrix& x) const;
  Matrix gradient(const Matrix& x) const;
  Matrix hessian(const Matrix& x, const Matrix& v) const;

  bool has_gradient() const { return static_cast<bool>(grad_); }
  bool has_hessian() const { return static_cast<bool>(hess_); }

  std::size_t value_count() const { return values_.load(); }
  std::size_t gradient_count() const { return grads_.load(); }
  std::size_t hessian_count() const { return hessians_.load(); }
  void reset_counters();

 private:
  ValueFn f_;
  GradientFn grad_;
  HessianFn hess_;
  mutable std::atomic<std::size_t> values_{0};
  mutable std::atomic<std::size_t> grads_{0};
  mutable std::atomic<std::size_t> hessians_{0};
};

}  // namespace rarc
