#pragma once

#include "rarc/numkernel.hpp"

// Closed-form great-circle maps shared by Sphere and Oblique (row-wise).
namespace rarc::detail {

Vector sphere_exp(const Vector& x, const Vector& v);
Vector sphere_transport(const Vector& x, const Vector& v, const Vector& u);
Vector sphere_inverse_transport(const Vector& x, const Vector& v, const Vector& w);

}  // namespace rarc::detail
