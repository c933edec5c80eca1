#include "rarc/subsolver.hpp"

#include "rarc/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace rarc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSecularIters = 200;

// The secular functions are written in terms of the offset delta = lambda -
// lambda_low, with shifted(i) = eigs(i) + lambda_low formed once (exactly zero
// on the bottom eigenspace). Near the pole this keeps the relative accuracy
// of eigs(i) + lambda that iterating on lambda itself would cancel away.

// Coordinates of w = -(shifted + delta)^{-1} g_hat. Components with
// g_hat_i == 0 are zero regardless of the pole.
Vector secular_w(const Vector& shifted, const Vector& g_hat, double delta) {
  Vector w(shifted.size());
  for (Index i = 0; i < shifted.size(); ++i) {
    w(i) = g_hat(i) == 0.0 ? 0.0 : -g_hat(i) / (shifted(i) + delta);
  }
  return w;
}

struct PhiValue {
  double phi;
  double dphi;
};

PhiValue secular_phi(const Vector& shifted, const Vector& g_hat, double sigma,
                     double lambda_low, double delta) {
  const Vector w = secular_w(shifted, g_hat, delta);
  const double nw = w.norm();
  double dnw = 0.0;
  if (nw > 0.0) {
    for (Index i = 0; i < w.size(); ++i) {
      if (w(i) != 0.0) dnw -= w(i) * w(i) / (shifted(i) + delta);
    }
    dnw /= nw;
  }
  return {nw - 2.0 * (lambda_low + delta) / sigma, dnw - 2.0 / sigma};
}

}  // namespace

std::string_view to_string(SubproblemStatus s) {
  switch (s) {
    case SubproblemStatus::GlobalSecular: return "GlobalSecular";
    case SubproblemStatus::CGFallback: return "CGFallback";
  }
  return "?";
}

SecularResult secular_solve(const Vector& eigs, const Vector& g_hat, double sigma_cub) {
  if (eigs.size() != g_hat.size()) {
    throw DimensionError("secular_solve: eigenvalue / gradient length mismatch");
  }
  if (!(sigma_cub > 0.0)) throw DomainError("secular_solve: sigma_cub must be > 0");
  const Index n = eigs.size();
  SecularResult out;
  out.w = Vector::Zero(n);
  if (n == 0) return out;

  const double mu_min = eigs(0);
  const double lambda_low = std::max(0.0, -mu_min);
  const double g_norm = g_hat.norm();

  if (g_norm == 0.0 && lambda_low == 0.0) return out;

  Vector shifted(n);
  for (Index i = 0; i < n; ++i) shifted(i) = lambda_low > 0.0 ? eigs(i) - mu_min : eigs(i);

  if (lambda_low > 0.0) {
    // Bottom eigenspace, with a cluster tolerance relative to the spectrum.
    const double spread = std::max(1.0, eigs.cwiseAbs().maxCoeff());
    const double cluster_tol = 1e-12 * spread;
    Index bottom = 0;
    while (bottom < n && shifted(bottom) <= cluster_tol) ++bottom;

    double g_bottom = 0.0;
    for (Index i = 0; i < bottom; ++i) g_bottom += g_hat(i) * g_hat(i);
    g_bottom = std::sqrt(g_bottom);

    Vector w_rest = Vector::Zero(n);
    for (Index i = bottom; i < n; ++i) {
      if (g_hat(i) != 0.0) w_rest(i) = -g_hat(i) / shifted(i);
    }
    const double target = 2.0 * lambda_low / sigma_cub;
    const double rest_norm = w_rest.norm();
    if (rest_norm <= target) {
      // The interior root, if any, sits at lambda_low + delta with
      // delta ~ |g_bottom| / s. Below rounding of lambda_low it is the hard case.
      const double s = std::sqrt(std::max(0.0, target * target - rest_norm * rest_norm));
      const bool hard = g_bottom == 0.0 ||
                        (s > 0.0 && g_bottom / s <= 64.0 * kEps * lambda_low);
      if (hard) {
        out.lambda = lambda_low;
        out.w = w_rest;
        out.hard_case = true;
        if (g_bottom == 0.0) {
          out.w(0) = s;
        } else {
          for (Index i = 0; i < bottom; ++i) out.w(i) = -s * g_hat(i) / g_bottom;
        }
        return out;
      }
    }
  }

  // phi is convex and decreasing in delta on (0, inf), positive near the
  // pole; hi = sqrt(sigma |g| / 2) already has phi(hi) <= 0.
  auto phi_at = [&](double delta) {
    return secular_phi(shifted, g_hat, sigma_cub, lambda_low, delta);
  };
  double lo = 0.0;
  double hi = std::sqrt(0.5 * sigma_cub * g_norm);
  if (!(hi > 0.0)) hi = 1.0;
  int grow = 0;
  while (phi_at(hi).phi > 0.0) {
    hi *= 2.0;
    if (++grow > 2000 || !std::isfinite(hi)) {
      throw NumericalError("secular_solve: could not bracket the root");
    }
  }

  double delta = hi;
  PhiValue val = phi_at(delta);
  int it = 0;
  for (; it < kMaxSecularIters; ++it) {
    if (val.phi == 0.0) break;
    if (val.phi > 0.0) {
      lo = delta;
    } else {
      hi = delta;
    }
    if (hi - lo <= 2.0 * kEps * hi) break;
    double next = delta - val.phi / val.dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == delta) break;
    delta = next;
    val = phi_at(delta);
    if (std::abs(val.phi) <= 4.0 * kEps * (1.0 + 2.0 * (lambda_low + delta) / sigma_cub)) {
      ++it;
      break;
    }
  }
  if (it >= kMaxSecularIters &&
      std::abs(val.phi) > 1e-12 * (1.0 + g_norm) && hi - lo > 4.0 * kEps * hi) {
    throw NumericalError("secular_solve: no convergence after " +
                         std::to_string(kMaxSecularIters) + " iterations");
  }
  out.lambda = lambda_low + delta;
  out.w = secular_w(shifted, g_hat, delta);
  out.iterations = it;
  return out;
}

bool meets_model_conditions(const CubicModel& m, const Vector& v, double theta) {
  if (model_decrease(m, v) > 0.0) return false;
  const Vector grad = grad_model(m, v);
  const double vn = v.norm();
  const double gn = grad.norm();
  if (gn <= theta * vn * vn) return true;
  // Rounding floor of the residual evaluation itself.
  const double floor = 64.0 * kEps *
                       (m.g.norm() + (m.b * v).norm() + 0.5 * m.sigma_cub * vn * vn);
  return gn <= floor;
}

namespace {

SubproblemSolution make_solution(const CubicModel& m, Vector v, double lambda_min_b,
                                 SubproblemStatus status, int iterations) {
  SubproblemSolution s;
  s.model_value = eval_model(m, v);
  s.grad_norm = grad_model(m, v).norm();
  s.multiplier = 0.5 * m.sigma_cub * v.norm();
  s.lambda_min_b = lambda_min_b;
  s.status = status;
  s.iterations = iterations;
  s.v = std::move(v);
  return s;
}

double directional_slope(const CubicModel& m, const Vector& v, const Vector& d) {
  return grad_model(m, v).dot(d);
}

// Step length along a descent direction d: locate a sign change of the
// slope, refine it by bisection, and fall back to halving if the result does
// not decrease the model.
double line_search(const CubicModel& m, const Vector& v, const Vector& d) {
  const double m0 = model_decrease(m, v);
  const double slope0 = directional_slope(m, v, d);
  if (!(slope0 < 0.0)) return 0.0;

  const double curv = d.dot(m.b * d) + 0.5 * m.sigma_cub * v.norm() * d.squaredNorm();
  double hi = curv > 0.0 ? -slope0 / curv : 1.0 / std::max(1.0, d.norm());
  int grow = 0;
  while (directional_slope(m, v, d) < 0.0 &&
         directional_slope(m, v + hi * d, d) < 0.0) {
    hi *= 2.0;
    if (++grow > 200) return 0.0;
  }
  double lo = 0.0;
  for (int i = 0; i < 100 && hi - lo > 4.0 * kEps * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (directional_slope(m, v + mid * d, d) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    if (model_decrease(m, v + t * d) < m0) return t;
    t *= 0.5;
  }
  return 0.0;
}

}  // namespace

SubproblemSolution cg_fallback(const CubicModel& m, double theta, const Vector& v_init,
                               int budget) {
  validate(m);
  if (budget < 1) throw DomainError("cg_fallback: budget must be >= 1");
  if (v_init.size() != m.dim()) throw DimensionError("cg_fallback: v_init length");

  Vector v = model_decrease(m, v_init) > 0.0 ? Vector::Zero(m.dim()) : v_init;
  Vector grad = grad_model(m, v);
  Vector dir = -grad;
  int it = 0;
  for (; it < budget; ++it) {
    if (meets_model_conditions(m, v, theta)) break;
    if (grad.dot(dir) >= 0.0) dir = -grad;
    const double t = line_search(m, v, dir);
    if (t == 0.0) break;
    Vector v_next = v + t * dir;
    Vector grad_next = grad_model(m, v_next);
    const double denom = grad.squaredNorm();
    const double beta =
        denom > 0.0 ? std::max(0.0, grad_next.dot(grad_next - grad) / denom) : 0.0;
    dir = -grad_next + beta * dir;
    v = std::move(v_next);
    grad = std::move(grad_next);
  }
  return make_solution(m, std::move(v), std::numeric_limits<double>::quiet_NaN(),
                       SubproblemStatus::CGFallback, it);
}

SubproblemSolution solve_cubic(const CubicModel& m, double theta) {
  validate(m);
  if (!(theta >= 0.0)) throw DomainError("solve_cubic: theta must be >= 0");
  const Index n = m.dim();
  if (n == 0) {
    return make_solution(m, Vector(0), 0.0, SubproblemStatus::GlobalSecular, 0);
  }

  const SymEigResult eig = sym_eig(m.b);
  const double lmin = eig.eigenvalues(0);
  Vector start = Vector::Zero(n);
  try {
    const Vector g_hat = eig.eigenvectors.transpose() * m.g;
    const SecularResult sec = secular_solve(eig.eigenvalues, g_hat, m.sigma_cub);
    Vector v = eig.eigenvectors * sec.w;
    if (meets_model_conditions(m, v, theta)) {
      return make_solution(m, std::move(v), lmin, SubproblemStatus::GlobalSecular,
                           sec.iterations);
    }
    if (model_decrease(m, v) <= 0.0) start = std::move(v);
  } catch (const NumericalError&) {
    // fall through to CG from the origin
  }

  const int budget = std::max<int>(500, static_cast<int>(50 * n));
  SubproblemSolution cg = cg_fallback(m, theta, start, budget);
  cg.lambda_min_b = lmin;
  if (meets_model_conditions(m, cg.v, theta)) return cg;
  const double vn = cg.v.norm();
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "solve_cubic: model conditions not met (|grad m| = %.3e, theta |v|^2 = %.3e, "
                "m(v) - f0 = %.3e)",
                cg.grad_norm, theta * vn * vn, model_decrease(m, cg.v));
  throw SubsolverFailure(buf, cg.grad_norm, theta * vn * vn);
}

bool check_second_order(const Matrix& b, double sigma_half_v, double theta_v_prev) {
  return lambda_min(b) >= -(sigma_half_v + theta_v_prev);
}

}  // namespace rarc
