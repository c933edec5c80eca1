#pragma once

#include "rarc/numkernel.hpp"

namespace rarc {

/// Cubic model in tangent-basis coordinates:
///   m(v) = f0 + g^T v + 1/2 v^T B v + (sigma_cub / 6) |v|^3
/// where sigma_cub = 2^alpha * sigma_k for the current trial.
struct CubicModel {
  double f0 = 0.0;
  Vector g;
  Matrix b;
  double sigma_cub = 1.0;

  Index dim() const { return g.size(); }
};

/// Checks shapes, symmetry (1e-12 relative), sigma_cub > 0 and finiteness.
void validate(const CubicModel& m);

double eval_model(const CubicModel& m, const Vector& v);

/// m(v) - f0, computed without adding f0 so tiny decreases keep their sign.
double model_decrease(const CubicModel& m, const Vector& v);

/// g + B v + (sigma_cub / 2) |v| v
Vector grad_model(const CubicModel& m, const Vector& v);

}  // namespace rarc
