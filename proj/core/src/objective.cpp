#include "rarc/objective.hpp"

#include "rarc/error.hpp"

#include <cmath>

namespace rarc {

Objective::Objective(ValueFn f, GradientFn grad, HessianFn hess)
    : f_(std::move(f)), grad_(std::move(grad)), hess_(std::move(hess)) {
  if (!f_) throw DomainError("Objective: value function is required");
}

Objective::Objective(const Objective& other)
    : f_(other.f_),
      grad_(other.grad_),
      hess_(other.hess_),
      values_(other.values_.load()),
      grads_(other.grads_.load()),
      hessians_(other.hessians_.load()) {}

Objective& Objective::operator=(const Objective& other) {
  if (this != &other) {
    f_ = other.f_;
    grad_ = other.grad_;
    hess_ = other.hess_;
    values_ = other.values_.load();
    grads_ = other.grads_.load();
    hessians_ = other.hessians_.load();
  }
  return *this;
}

double Objective::value(const Matrix& x) const {
  ++values_;
  const double v = f_(x);
  if (!std::isfinite(v)) {
    throw EvaluationError("objective returned a non-finite value", x);
  }
  return v;
}

Matrix Objective::gradient(const Matrix& x) const {
  if (!grad_) throw CapabilityError("objective has no exact gradient");
  ++grads_;
  Matrix g = grad_(x);
  if (!all_finite(g)) {
    throw EvaluationError("gradient has non-finite entries", x);
  }
  return g;
}

Matrix Objective::hessian(const Matrix& x, const Matrix& v) const {
  if (!hess_) throw CapabilityError("objective has no exact Hessian");
  ++hessians_;
  return hess_(x, v);
}

void Objective::reset_counters() {
  values_ = 0;
  grads_ = 0;
  hessians_ = 0;
}

}  // namespace rarc
