#include "fsidd/mms.hpp"

#include <cmath>

namespace fsidd {

MmsValues mms_exact(const MaterialParams& k, double x, double y, double t) {
  const double X = x + t, Y = y + t;
  const double sX = std::sin(X), cX = std::cos(X), sY = std::sin(Y), cY = std::cos(Y);
  const double s = std::sin(X + Y), c = std::cos(X + Y);

  MmsValues v;
  v.u = {s, -s};
  v.grad_u << c, c, -c, -c;
  v.p = -2.0 * k.nu_f * c + 2.0 * k.nu_s * cX * sY;
  v.grad_p = {2.0 * k.nu_f * s - 2.0 * k.nu_s * sX * sY, 2.0 * k.nu_f * s + 2.0 * k.nu_s * cX * cY};
  v.eta = {sX * sY, cX * cY};
  v.grad_eta << cX * sY, sX * cY, -sX * cY, -cX * sY;
  v.eta_dot = {s, -s};

  // f_f = rho_f u_t - nu_f Δu + ∇p (u is divergence free)
  v.f_f = {2.0 * k.rho_f * c + 4.0 * k.nu_f * s - 2.0 * k.nu_s * sX * sY,
           -2.0 * k.rho_f * c + 2.0 * k.nu_s * cX * cY};
  // f_s = rho_s eta_tt - nu_s Δeta (eta is divergence free, Δeta = -2 eta)
  v.f_s = {2.0 * k.rho_s * c + 2.0 * k.nu_s * sX * sY, -2.0 * k.rho_s * c + 2.0 * k.nu_s * cX * cY};

  const Eigen::Matrix2d du = 0.5 * (v.grad_u + v.grad_u.transpose());
  v.sigma_f = 2.0 * k.nu_f * du - v.p * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d deta = 0.5 * (v.grad_eta + v.grad_eta.transpose());
  v.sigma_s = 2.0 * k.nu_s * deta + k.lambda * v.grad_eta.trace() * Eigen::Matrix2d::Identity();
  return v;
}

MmsFields mms_fields(const MaterialParams& params) {
  MmsFields f;
  f.u = [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).u; };
  f.eta = [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).eta; };
  f.eta_dot = [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).eta_dot; };
  f.f_f = [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).f_f; };
  f.f_s = [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).f_s; };
  f.p = [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).p; };
  f.u_exact = {f.u, [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).grad_u; }};
  f.eta_exact = {f.eta, [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).grad_eta; }};
  f.p_exact = {f.p, [params](const Point& q, double t) { return mms_exact(params, q.x, q.y, t).grad_p; }};
  return f;
}

}  // namespace fsidd
