#include "rarc/solver.hpp"

#include "rarc/error.hpp"
#include "rarc/model.hpp"
#include "rarc/subsolver.hpp"

#include <cmath>
#include <span>
#include <string>

namespace rarc {

namespace {
constexpr double kStallNorm = 1e-14;
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& rule) {
    throw DomainError("invalid config: " + field + " " + rule);
  };
  if (!(sigma1 > 0.0) || !std::isfinite(sigma1)) fail("sigma1", "must be > 0");
  if (!(theta >= 0.0) || !std::isfinite(theta)) fail("theta", "must be >= 0");
  if (!(eps_g > 0.0)) fail("eps_g", "must be > 0");
  if (eps_H && !(*eps_H > 0.0)) fail("eps_H", "must be > 0");
  if (max_alpha < 1) fail("max_alpha", "must be >= 1");
  if (!(v0_norm > 0.0) || !std::isfinite(v0_norm)) fail("v0_norm", "must be > 0");
}

double SolverConfig::eps_h_or_default() const {
  return eps_H ? *eps_H : std::sqrt(eps_g);
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::FirstOrderConverged: return "FirstOrderConverged";
    case RunStatus::SecondOrderConverged: return "SecondOrderConverged";
    case RunStatus::MaxIters: return "MaxIters";
    case RunStatus::StalledStep: return "StalledStep";
    case RunStatus::SubsolverFailure: return "SubsolverFailure";
    case RunStatus::AlphaOverflow: return "AlphaOverflow";
  }
  return "?";
}

bool is_converged(RunStatus s) {
  return s == RunStatus::FirstOrderConverged || s == RunStatus::SecondOrderConverged;
}

int initial_alpha(double sigma_k, double sigma1) {
  if (!(sigma_k > 0.0) || !(sigma1 > 0.0)) {
    throw DomainError("initial_alpha: sigma values must be > 0");
  }
  int alpha = 0;
  while (std::ldexp(sigma_k, alpha - 1) < sigma1) ++alpha;
  return alpha;
}

bool accept_test(double f_trial, double f_k, double sigma_k, int alpha,
                 double v_prev_norm, double v_norm) {
  const double gain = sigma_k / 24.0 * v_prev_norm * v_prev_norm * v_prev_norm;
  const double cost = std::ldexp(sigma_k, alpha) / 24.0 * v_norm * v_norm * v_norm;
  return f_trial <= f_k + gain - cost;
}

double update_sigma(double sigma_k, int alpha_k) {
  if (!(sigma_k > 0.0)) throw DomainError("update_sigma: sigma_k must be > 0");
  return std::ldexp(sigma_k, alpha_k - 1);
}

namespace {

struct TrialDerivatives {
  const Objective& obj;
  const Point& p;
  const TangentBasis& basis;
  const SolverConfig& config;
  double f_at_p;

  std::optional<Vector> exact_g;
  std::optional<Matrix> exact_b;

  Vector gradient(double h, std::vector<double>& forward) {
    forward.clear();
    if (config.gradient_variant == GradientVariant::Exact) {
      if (!exact_g) exact_g = exact_gradient_coords(obj, p, basis);
      return *exact_g;
    }
    FdGradient fd = fd_gradient_samples(obj, p, basis, h);
    forward = std::move(fd.forward);
    return std::move(fd.g);
  }

  Matrix hessian(double h, const std::vector<double>& forward) {
    const double hb = hessian_step(config.hessian_variant, h);
    switch (config.hessian_variant) {
      case HessianVariant::Pullback:
        // The gradient pass's forward samples are only reusable at the same step.
        return fd_hessian_pullback(obj, p, basis, hb, f_at_p,
                                   hb == h ? std::span<const double>(forward)
                                           : std::span<const double>());
      case HessianVariant::Transport:
        return fd_hessian_transport(obj, p, basis, hb, f_at_p);
      case HessianVariant::GradCalls:
        return fd_hessian_gradcalls(obj, p, basis, h);
      case HessianVariant::Exact:
        if (!exact_b) exact_b = exact_hessian_coords(obj, p, basis);
        return *exact_b;
    }
    throw UsageError("unknown Hessian variant");
  }
};

}  // namespace

StepOutcome outer_step(const SolverState& state, const Objective& obj,
                       const SolverConfig& config, std::size_t f_eval_base) {
  const Manifold& m = *state.p.manifold;
  const TangentBasis basis = tangent_basis(state.p);
  TrialDerivatives deriv{obj, state.p, basis, config, state.f, {}, {}};

  const int alpha0 = initial_alpha(state.sigma, config.sigma1);
  const double eps_h = config.eps_h_or_default();

  StepOutcome out;
  IterateRecord& rec = out.record;
  rec.k = state.k;
  rec.f_val = state.f;
  rec.v_prev_norm = state.v_prev_norm;
  rec.sigma_k = state.sigma;
  rec.alpha_k = alpha0;

  auto finish = [&](RunStatus s, std::string msg = {}) {
    rec.v_norm = 0.0;
    rec.f_next.reset();
    rec.terminal = true;
    rec.f_evals_cum = obj.value_count() - f_eval_base;
    out.next = state;
    out.stop = s;
    out.message = std::move(msg);
    return out;
  };

  std::vector<double> forward;
  std::size_t trials = 0;
  for (int alpha = alpha0;; ++alpha) {
    if (alpha > config.max_alpha) {
      return finish(RunStatus::AlphaOverflow,
                    "alpha exceeded " + std::to_string(config.max_alpha));
    }
    const FdStep step = fd_step(state.v_prev_norm, state.sigma, alpha);
    const Vector g = deriv.gradient(step.h, forward);
    std::optional<Matrix> b;

    if (alpha == alpha0) {
      rec.g_norm = g.norm();
      rec.h = step.h;
      rec.h_clamped = step.clamped;
      if (rec.g_norm <= config.eps_g) {
        if (!config.second_order_mode) return finish(RunStatus::FirstOrderConverged);
        b = deriv.hessian(step.h, forward);
        rec.lambda_min_B = lambda_min(*b);
        if (*rec.lambda_min_B >= -eps_h) return finish(RunStatus::SecondOrderConverged);
      }
      if (state.k > config.max_outer_iters) return finish(RunStatus::MaxIters);
    }
    if (!b) b = deriv.hessian(step.h, forward);
    ++trials;

    const double sigma_cub = std::ldexp(state.sigma, alpha);
    const CubicModel model{state.f, g, *b, sigma_cub};
    SubproblemSolution sol;
    try {
      sol = solve_cubic(model, config.theta);
    } catch (const SubsolverFailure& e) {
      rec.alpha_k = alpha;
      rec.accepted_trial_count = trials;
      return finish(RunStatus::SubsolverFailure, e.what());
    }
    const double v_norm = sol.v.norm();

    if (config.second_order_mode &&
        !(sol.lambda_min_b >= -(0.5 * sigma_cub * v_norm + config.theta * state.v_prev_norm))) {
      continue;
    }

    Matrix x_trial = m.retract(state.p.coords, basis.to_ambient(sol.v));
    double f_trial;
    try {
      f_trial = obj.value(x_trial);
    } catch (const EvaluationError&) {
      continue;  // a non-finite trial value fails the test
    }
    if (!accept_test(f_trial, state.f, state.sigma, alpha, state.v_prev_norm, v_norm)) {
      continue;
    }

    rec.g_norm = g.norm();
    rec.h = step.h;
    rec.h_clamped = step.clamped;
    rec.alpha_k = alpha;
    rec.v_norm = v_norm;
    rec.lambda_min_B = sol.lambda_min_b;
    rec.f_next = f_trial;
    rec.accepted_trial_count = trials;
    rec.f_evals_cum = obj.value_count() - f_eval_base;

    out.next.p = Point{state.p.manifold, std::move(x_trial)};
    out.next.f = f_trial;
    out.next.v_prev_norm = v_norm;
    out.next.sigma = update_sigma(state.sigma, alpha);
    out.next.k = state.k + 1;
    if (v_norm < kStallNorm) {
      out.stop = RunStatus::StalledStep;
      out.message = "accepted step norm below 1e-14";
    }
    return out;
  }
}

RunResult run(const Objective& obj, ManifoldPtr manifold, const SolverConfig& config,
              std::optional<Point> p0) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t f_base = obj.value_count();
  const std::size_t g_base = obj.gradient_count();
  const std::size_t h_base = obj.hessian_count();

  Point p = p0 ? *p0 : random_point(manifold, config.seed);
  if (p.manifold != manifold) {
    throw UsageError("run: initial point lives on a different manifold object");
  }

  SolverState state;
  state.f = obj.value(p.coords);
  state.p = std::move(p);
  state.v_prev_norm = norm(state.p, random_tangent(state.p, config.seed)) * config.v0_norm;
  state.sigma = config.sigma1;
  state.k = 1;

  RunResult result;
  result.v0_norm = state.v_prev_norm;
  for (;;) {
    StepOutcome step = outer_step(state, obj, config, f_base);
    result.history.push_back(step.record);
    if (step.stop && step.record.terminal) {
      result.status = *step.stop;
      result.message = std::move(step.message);
      state = std::move(step.next);
      break;
    }
    state = std::move(step.next);
    if (step.stop) {
      // Stalled: close the history with a terminal record at the new point.
      IterateRecord last;
      last.k = state.k;
      last.f_val = state.f;
      last.v_prev_norm = state.v_prev_norm;
      last.sigma_k = state.sigma;
      last.alpha_k = initial_alpha(state.sigma, config.sigma1);
      last.g_norm = step.record.g_norm;
      last.f_evals_cum = obj.value_count() - f_base;
      last.terminal = true;
      result.history.push_back(last);
      result.status = *step.stop;
      result.message = std::move(step.message);
      break;
    }
  }

  result.final_point = std::move(state.p);
  result.f_evals = obj.value_count() - f_base;
  result.grad_evals = obj.gradient_count() - g_base;
  result.hess_evals = obj.hessian_count() - h_base;
  result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - t0);
  return result;
}

}  // namespace rarc
