#include "rarc/model.hpp"

#include "rarc/error.hpp"

#include <cmath>
#include <string>

namespace rarc {

namespace {
void check_length(const CubicModel& m, const Vector& v, const char* op) {
  if (v.size() != m.g.size()) {
    throw DimensionError(std::string(op) + ": vector length " +
                         std::to_string(v.size()) + " != model dimension " +
                         std::to_string(m.g.size()));
  }
}
}  // namespace

void validate(const CubicModel& m) {
  const Index n = m.g.size();
  if (m.b.rows() != n || m.b.cols() != n) {
    throw DimensionError("CubicModel: B must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  }
  if (!(m.sigma_cub > 0.0)) throw DomainError("CubicModel: sigma_cub must be > 0");
  if (!std::isfinite(m.f0) || !all_finite(m.g) || !all_finite(m.b)) {
    throw DomainError("CubicModel: non-finite entries");
  }
  if (max_abs(m.b - m.b.transpose()) > 1e-12 * (1.0 + max_abs(m.b))) {
    throw DomainError("CubicModel: B is not symmetric");
  }
}

double model_decrease(const CubicModel& m, const Vector& v) {
  check_length(m, v, "eval_model");
  const double nv = v.norm();
  return m.g.dot(v) + 0.5 * v.dot(m.b * v) + (m.sigma_cub / 6.0) * nv * nv * nv;
}

double eval_model(const CubicModel& m, const Vector& v) {
  return m.f0 + model_decrease(m, v);
}

Vector grad_model(const CubicModel& m, const Vector& v) {
  check_length(m, v, "grad_model");
  return m.g + m.b * v + (0.5 * m.sigma_cub * v.norm()) * v;
}

}  // namespace rarc
