#pragma once

#include <Eigen/Core>

#include "fsidd/fem.hpp"
#include "fsidd/subdomain.hpp"

namespace fsidd {

/// Closed-form manufactured solution on Ω_f = (0,1)², Ω_s = (0,1)×(1,2)
/// with X = x + t, Y = y + t:
///   u   = (sin(X+Y), -sin(X+Y))
///   p   = -2 nu_f cos(X+Y) + 2 nu_s cos X sin Y
///   eta = (sin X sin Y, cos X cos Y)
/// and the forcings that make it satisfy Stokes / linear elastodynamics.
struct MmsValues {
  Eigen::Vector2d u;
  Eigen::Matrix2d grad_u;  // row i = gradient of u_i
  double p;
  Eigen::Vector2d grad_p;
  Eigen::Vector2d eta;
  Eigen::Matrix2d grad_eta;
  Eigen::Vector2d eta_dot;
  Eigen::Vector2d f_f;
  Eigen::Vector2d f_s;
  Eigen::Matrix2d sigma_f;  // 2 nu_f D(u) - p I
  Eigen::Matrix2d sigma_s;  // 2 nu_s D(eta) + lambda div(eta) I
};

MmsValues mms_exact(const MaterialParams& params, double x, double y, double t);

/// Field adaptors for assembly, interpolation and error norms.
struct MmsFields {
  VectorField u, eta, eta_dot, f_f, f_s;
  ScalarField p;
  VectorExact u_exact, eta_exact;
  ScalarExact p_exact;
};

MmsFields mms_fields(const MaterialParams& params);

}  // namespace fsidd
