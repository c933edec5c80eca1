#include "oracles.hpp"

#include "rarc/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rarc::testing {

double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

namespace {

double cubic_value(const CubicModel& m, const Vector& v) {
  double quad = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    for (Index j = 0; j < v.size(); ++j) quad += v(i) * m.b(i, j) * v(j);
  }
  const double nv = std::sqrt(v.squaredNorm());
  return m.f0 + m.g.dot(v) + 0.5 * quad + m.sigma_cub / 6.0 * nv * nv * nv;
}

Vector cubic_grad(const CubicModel& m, const Vector& v) {
  return m.g + m.b * v + 0.5 * m.sigma_cub * v.norm() * v;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace

MultiStartResult multistart_cubic_min(const CubicModel& m, std::uint64_t seed, int starts) {
  const Index n = m.g.size();
  CounterRng rng(seed, 0xC0FFEE);
  const double bnorm = m.b.norm();
  const double scale = 2.0 * (bnorm + std::sqrt(m.sigma_cub * m.g.norm())) / m.sigma_cub + 1.0;
  const double tol = 1e-11 * (1.0 + m.g.norm());

  MultiStartResult best;
  best.value = INFINITY;
  for (int s = 0; s < starts; ++s) {
    Vector v = Vector::Zero(n);
    if (s > 0) {
      for (Index i = 0; i < n; ++i) v(i) = scale * rng.normal() / std::sqrt(double(n));
    }
    double fv = cubic_value(m, v);
    double t = 1.0 / (bnorm + m.sigma_cub * (v.norm() + 1.0) + 1.0);
    for (int it = 0; it < 20000; ++it) {
      const Vector g = cubic_grad(m, v);
      const double gg = g.squaredNorm();
      if (std::sqrt(gg) <= tol) break;
      int shrink = 0;
      Vector trial = v - t * g;
      double ft = cubic_value(m, trial);
      while (ft > fv - 1e-4 * t * gg && shrink < 60) {
        t *= 0.5;
        trial = v - t * g;
        ft = cubic_value(m, trial);
        ++shrink;
      }
      if (shrink == 60) break;
      v = trial;
      fv = ft;
      if (shrink == 0) t *= 2.0;
    }
    if (fv < best.value || (fv == best.value && lex_less(v, best.v))) {
      best.value = fv;
      best.v = v;
    }
  }
  return best;
}

CubicModel random_cubic_model(Index n, std::uint64_t seed) {
  CounterRng rng(seed, 0xC0DE);
  CubicModel m;
  m.f0 = rng.normal();
  m.g = gaussian_matrix(n, 1, rng);
  const Matrix b = gaussian_matrix(n, n, rng);
  m.b = 0.5 * (b + b.transpose());
  m.sigma_cub = std::exp(std::log(0.1) + rng.uniform() * std::log(100.0));
  return m;
}

CubicModel random_hard_case_model(Index n, std::uint64_t seed) {
  CounterRng rng(seed, 0xBADC0DE);
  const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian_matrix(n, n, rng)).householderQ();
  Vector mu(n);
  mu(0) = -0.5 - rng.uniform();
  for (Index i = 1; i < n; ++i) mu(i) = mu(0) + 0.5 + 2.0 * rng.uniform();
  Vector g_hat(n);
  g_hat(0) = 0.0;
  for (Index i = 1; i < n; ++i) g_hat(i) = 0.05 * rng.normal();
  CubicModel m;
  m.f0 = 0.0;
  m.b = q * mu.asDiagonal() * q.transpose();
  m.b = 0.5 * (m.b + m.b.transpose()).eval();
  m.g = q * g_hat;
  m.sigma_cub = 0.5 + rng.uniform();
  return m;
}

double op_norm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix sphere_quadratic_hessian_coords(const Matrix& a, const TangentBasis& basis) {
  const Matrix& x = basis.base.coords;
  const Index n = basis.size();
  Matrix e(x.rows(), n);
  for (Index i = 0; i < n; ++i) e.col(i) = basis.vectors[static_cast<std::size_t>(i)].col(0);
  const double xax = (x.transpose() * a * x)(0, 0);
  return e.transpose() * a * e - xax * Matrix::Identity(n, n);
}

std::string audit_history(const RunResult& r, const SolverConfig& c) {
  std::ostringstream why;
  const auto& h = r.history;
  if (h.empty()) return "empty history";
  if (!h.back().terminal) return "last record is not terminal";
  double sum_v3 = 0.0;
  double fmax = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const IterateRecord& rec = h[i];
    fmax = std::max(fmax, std::abs(rec.f_val));
    if (rec.sigma_k < c.sigma1) {
      why << "k=" << rec.k << ": sigma_k " << rec.sigma_k << " < sigma1";
      return why.str();
    }
    if (i > 0 && rec.k != h[i - 1].k + 1) return "k not consecutive";
    if (rec.terminal) {
      if (i + 1 != h.size()) return "terminal record before the end";
      continue;
    }
    if (!rec.f_next) return "accepted record without f_next";
    const double vp3 = std::pow(rec.v_prev_norm, 3);
    const double v3 = std::pow(rec.v_norm, 3);
    const double bound = rec.f_val + rec.sigma_k / 24.0 * vp3 -
                         std::ldexp(rec.sigma_k, rec.alpha_k) / 24.0 * v3 +
                         1e-12 * (1.0 + std::abs(rec.f_val));
    if (!(*rec.f_next <= bound)) {
      why << "k=" << rec.k << ": acceptance inequality fails (" << *rec.f_next << " > "
          << bound << ")";
      return why.str();
    }
    if (c.second_order_mode) {
      if (!rec.lambda_min_B) return "second-order record without lambda_min_B";
      const double lim = -(std::ldexp(rec.sigma_k, rec.alpha_k - 1) * rec.v_norm +
                           c.theta * rec.v_prev_norm);
      if (!(*rec.lambda_min_B >= lim)) {
        why << "k=" << rec.k << ": curvature condition fails";
        return why.str();
      }
    }
    const IterateRecord& next = h[i + 1];
    if (next.f_val != *rec.f_next) return "f_next does not match the next f_val";
    if (next.sigma_k != std::ldexp(rec.sigma_k, rec.alpha_k - 1)) return "sigma update mismatch";
    if (next.v_prev_norm != rec.v_norm) return "v_prev_norm mismatch";
    sum_v3 += v3;
  }
  const double slack = 24.0 * static_cast<double>(h.size()) * 1e-12 * (1.0 + fmax) / c.sigma1;
  const double tele = 24.0 * (h.front().f_val - h.back().f_val) / c.sigma1 +
                      std::pow(r.v0_norm, 3) + slack;
  if (!(sum_v3 <= tele)) {
    why << "telescoped bound fails: " << sum_v3 << " > " << tele;
    return why.str();
  }
  return {};
}

}  // namespace rarc::testing
