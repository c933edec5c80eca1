#pragma once

#include "rarc/manifolds.hpp"

#include <vector>

namespace rarc::testing {

inline const std::vector<double> kSlopeSteps = {1e-2, 1e-3, 1e-4, 1e-5};

struct SlopeCheck {
  std::vector<double> errors;
  double slope = 0.0;
  /// Every error sits below the rounding floor of the difference quotient,
  /// i.e. the measured quantity vanishes identically.
  bool at_rounding_floor = false;
};

/// |(R_x(hv) - R_x(-hv)) / 2h - v| over kSlopeSteps.
SlopeCheck retraction_first_order(const Manifold& m, const Matrix& x, const Matrix& v);

/// |P_x[(R_x(hv) - 2x + R_x(-hv)) / h^2]|, the tangential part of the
/// second difference, over kSlopeSteps.
SlopeCheck retraction_tangential_acceleration(const Manifold& m, const Matrix& x,
                                              const Matrix& v);

/// max |<P u, P w> - <u, w>| over the pairs (u,u), (u,w), (w,w).
double transport_isometry_defect(const Manifold& m, const Matrix& x, const Matrix& v,
                                 const Matrix& u, const Matrix& w);

/// max |<e_i, e_j> - delta_ij| for the tangent basis at x.
double basis_orthonormality_defect(const Manifold& m, const Matrix& x);

}  // namespace rarc::testing
