#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "fem_detail.hpp"

namespace fsidd {

namespace {

template <class Field>
DofVector interpolate_impl(const FeSpace& space, const Field& f, double t) {
  const int ns = space.num_scalar_dofs();
  const int vd = space.vdim();
  DofVector out(space.num_dofs());
  for (int s = 0; s < ns; ++s) {
    const auto val = f(space.node(s), t);
    if constexpr (std::is_same_v<decltype(val), const double>) {
      out(s) = val;
    } else {
      for (int c = 0; c < vd; ++c) out(space.dof(c, s)) = val(c);
    }
  }
  if (space.kind() == ElementKind::P1_bubble) {
    // The hat functions contribute the vertex mean at the centroid.
    const Mesh& mesh = space.mesh();
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto cd = space.cell_dofs(t);
      for (int c = 0; c < vd; ++c) {
        const double mean = (out(space.dof(c, cd[0])) + out(space.dof(c, cd[1])) + out(space.dof(c, cd[2]))) / 3.0;
        out(space.dof(c, cd[3])) -= mean;
      }
    }
  }
  return out;
}

// Barycentric-test a triangle; returns reference coordinates if p lies inside.
bool locate_in(const detail::TriangleGeometry& g, const Point& p, double& xi, double& eta) {
  const Eigen::Vector2d r = g.jac.inverse() * Eigen::Vector2d(p.x - g.v[0].x, p.y - g.v[0].y);
  constexpr double tol = 1e-12;
  xi = r(0);
  eta = r(1);
  return xi >= -tol && eta >= -tol && xi + eta <= 1.0 + tol;
}

template <class Exact, class Value>
double error_impl(const FeSpace& space, const DofVector& coeffs, const Exact& exact, double t, Norm norm) {
  if (coeffs.size() != space.num_dofs()) throw std::invalid_argument("error_norm: coefficient vector size mismatch");
  if (norm == Norm::H1_semi && !exact.gradient) throw std::invalid_argument("error_norm: H1 needs the exact gradient");
  const Mesh& mesh = space.mesh();
  const auto& rule = triangle_rule(2 * space.degree() + 3);
  const int vd = space.vdim();
  detail::BasisAt b;
  double sum = 0.0;
  for (int tr = 0; tr < mesh.num_triangles(); ++tr) {
    const detail::TriangleGeometry geo(mesh, tr);
    const auto cd = space.cell_dofs(tr);
    for (const auto& q : rule) {
      b.eval(space.kind(), geo, q.xi, q.eta);
      const Point x = geo.map(q.xi, q.eta);
      const double w = q.weight * std::abs(geo.det);
      if (norm == Norm::L2) {
        Eigen::Vector2d uh = Eigen::Vector2d::Zero();
        for (int i = 0; i < b.n; ++i) {
          for (int c = 0; c < vd; ++c) uh(c) += coeffs(space.dof(c, cd[i])) * b.phi[i];
        }
        if constexpr (std::is_same_v<Value, double>) {
          const double e = uh(0) - exact.value(x, t);
          sum += w * e * e;
        } else {
          sum += w * (uh - exact.value(x, t)).squaredNorm();
        }
      } else {
        Eigen::Matrix2d gh = Eigen::Matrix2d::Zero();  // row = component
        for (int i = 0; i < b.n; ++i) {
          for (int c = 0; c < vd; ++c) gh.row(c) += coeffs(space.dof(c, cd[i])) * b.grad[i].transpose();
        }
        if constexpr (std::is_same_v<Value, double>) {
          sum += w * (gh.row(0).transpose() - exact.gradient(x, t)).squaredNorm();
        } else {
          sum += w * (gh - exact.gradient(x, t)).squaredNorm();
        }
      }
    }
  }
  return std::sqrt(sum);
}

}  // namespace

DofVector interpolate(const FeSpace& space, const VectorField& f, double t) {
  if (space.vdim() != 2) throw std::invalid_argument("interpolate: vector field on a scalar space");
  return interpolate_impl(space, f, t);
}

DofVector interpolate(const FeSpace& space, const ScalarField& f, double t) {
  if (space.vdim() != 1) throw std::invalid_argument("interpolate: scalar field on a vector space");
  return interpolate_impl(space, f, t);
}

Eigen::Vector2d evaluate(const FeSpace& space, const DofVector& coeffs, const Point& p) {
  const Mesh& mesh = space.mesh();
  auto eval_on = [&](int t, Eigen::Vector2d& out) {
    const detail::TriangleGeometry geo(mesh, t);
    double xi = 0.0, eta = 0.0;
    if (!locate_in(geo, p, xi, eta)) return false;
    detail::BasisAt b;
    b.eval(space.kind(), geo, xi, eta);
    const auto cd = space.cell_dofs(t);
    out.setZero();
    for (int i = 0; i < b.n; ++i) {
      for (int c = 0; c < space.vdim(); ++c) out(c) += coeffs(space.dof(c, cd[i])) * b.phi[i];
    }
    return true;
  };

  Eigen::Vector2d out;
  // Structured meshes: cell (i, j) owns triangles 2(j*nx+i) and 2(j*nx+i)+1.
  if (mesh.nx > 0 && mesh.num_triangles() == 2 * mesh.nx * mesh.ny) {
    const auto& r = mesh.rect;
    const int i = std::clamp(static_cast<int>((p.x - r.x0) / r.width() * mesh.nx), 0, mesh.nx - 1);
    const int j = std::clamp(static_cast<int>((p.y - r.y0) / r.height() * mesh.ny), 0, mesh.ny - 1);
    const int cell = j * mesh.nx + i;
    if (eval_on(2 * cell, out) || eval_on(2 * cell + 1, out)) return out;
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (eval_on(t, out)) return out;
  }
  throw std::invalid_argument("evaluate: point outside the mesh");
}

double error_norm(const FeSpace& space, const DofVector& coeffs, const VectorExact& exact, double t, Norm norm) {
  if (space.vdim() != 2) throw std::invalid_argument("error_norm: vector exact on a scalar space");
  return error_impl<VectorExact, Eigen::Vector2d>(space, coeffs, exact, t, norm);
}

double error_norm(const FeSpace& space, const DofVector& coeffs, const ScalarExact& exact, double t, Norm norm) {
  if (space.vdim() != 1) throw std::invalid_argument("error_norm: scalar exact on a vector space");
  return error_impl<ScalarExact, double>(space, coeffs, exact, t, norm);
}

}  // namespace fsidd
