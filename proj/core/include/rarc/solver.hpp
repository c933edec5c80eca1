#pragma once

#include "rarc/fdapprox.hpp"
#include "rarc/manifolds.hpp"
#include "rarc/objective.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rarc {

struct SolverConfig {
  double sigma1 = 1.0;
  double theta = 1.0;
  double eps_g = 1e-8;
  /// Second-order tolerance; sqrt(eps_g) is used when unset.
  std::optional<double> eps_H;
  std::size_t max_outer_iters = 1000;
  int max_alpha = 60;
  bool second_order_mode = false;
  HessianVariant hessian_variant = HessianVariant::Pullback;
  GradientVariant gradient_variant = GradientVariant::FD;
  double v0_norm = 1.0;
  std::uint64_t seed = 2024;

  /// Throws DomainError naming the offending field.
  void validate() const;
  double eps_h_or_default() const;
};

/// One outer iteration. Non-terminal records describe an accepted step from
/// p_k to p_{k+1}; the last record of every run is terminal and describes the
/// final point (v_norm = 0, no f_next).
struct IterateRecord {
  std::size_t k = 0;
  double f_val = 0.0;
  double g_norm = 0.0;
  double v_norm = 0.0;
  double v_prev_norm = 0.0;
  double sigma_k = 0.0;
  int alpha_k = 0;
  double h = 0.0;
  bool h_clamped = false;
  std::size_t f_evals_cum = 0;
  /// Trials evaluated in this iteration, the accepted one included.
  std::size_t accepted_trial_count = 0;
  std::optional<double> lambda_min_B;
  std::optional<double> f_next;
  bool terminal = false;
};

enum class RunStatus {
  FirstOrderConverged,
  SecondOrderConverged,
  MaxIters,
  StalledStep,
  SubsolverFailure,
  AlphaOverflow,
};

std::string_view to_string(RunStatus s);
bool is_converged(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::MaxIters;
  Point final_point;
  std::vector<IterateRecord> history;
  std::chrono::nanoseconds wall_time{0};
  double v0_norm = 0.0;
  std::size_t f_evals = 0;
  std::size_t grad_evals = 0;
  std::size_t hess_evals = 0;
  /// Diagnostic text for error statuses, empty otherwise.
  std::string message;
};

/// Smallest alpha >= 0 with 2^{alpha-1} sigma_k >= sigma1.
int initial_alpha(double sigma_k, double sigma1);

/// f_trial <= f_k + (sigma_k/24) |v_prev|^3 - (2^alpha sigma_k/24) |v|^3
bool accept_test(double f_trial, double f_k, double sigma_k, int alpha,
                 double v_prev_norm, double v_norm);

/// 2^{alpha_k - 1} sigma_k (exact power-of-two scaling).
double update_sigma(double sigma_k, int alpha_k);

struct SolverState {
  Point p;
  double f = 0.0;
  double v_prev_norm = 0.0;
  double sigma = 0.0;
  std::size_t k = 1;
};

struct StepOutcome {
  IterateRecord record;
  SolverState next;
  /// Set when the run ends at this iteration; `record` is then terminal.
  std::optional<RunStatus> stop;
  std::string message;
};

/// One outer iteration: the alpha loop up to an accepted trial or a stop.
/// `f_eval_base` is subtracted from the objective's value counter when
/// filling f_evals_cum.
StepOutcome outer_step(const SolverState& state, const Objective& obj,
                       const SolverConfig& config, std::size_t f_eval_base = 0);

/// Full run from p0 (or a seeded random point) with v_0 a seeded random unit
/// tangent scaled to config.v0_norm.
RunResult run(const Objective& obj, ManifoldPtr manifold, const SolverConfig& config,
              std::optional<Point> p0 = std::nullopt);

}  // namespace rarc
