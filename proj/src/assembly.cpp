#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "fem_detail.hpp"

namespace fsidd {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void require_same_mesh(const FeSpace& a, const FeSpace& b, const char* what) {
  if (&a.mesh() != &b.mesh()) throw std::invalid_argument(std::string(what) + ": spaces live on different meshes");
}

// Interface (or tagged boundary) mass, shared by assemble_form and
// assemble_boundary_mass.
SparseOperator boundary_mass(const FeSpace& trial, const FeSpace& test, BoundaryTag tag, double coeff) {
  if (trial.vdim() != test.vdim()) throw std::invalid_argument("boundary mass: component counts differ");
  const Mesh& mesh = test.mesh();
  const auto& rule = line_rule(trial.degree() + test.degree());
  Triplets trip;
  detail::BasisAt bu, bv;
  for (const auto& be : mesh.boundary_edges) {
    if (be.tag != tag) continue;
    const detail::TriangleGeometry geo(mesh, be.triangle);
    const double len = mesh.edge_length(be.edge);
    const auto cu = trial.cell_dofs(be.triangle);
    const auto cv = test.cell_dofs(be.triangle);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(cv.size(), cu.size());
    for (const auto& q : rule) {
      const auto r = detail::edge_reference_point(be.local, q.s);
      bu.eval(trial.kind(), geo, r[0], r[1]);
      bv.eval(test.kind(), geo, r[0], r[1]);
      const double w = coeff * q.weight * len;
      for (int i = 0; i < bv.n; ++i) {
        for (int j = 0; j < bu.n; ++j) local(i, j) += w * bv.phi[i] * bu.phi[j];
      }
    }
    for (int c = 0; c < test.vdim(); ++c) {
      for (int i = 0; i < local.rows(); ++i) {
        for (int j = 0; j < local.cols(); ++j) {
          if (local(i, j) != 0.0) trip.emplace_back(test.dof(c, cv[i]), trial.dof(c, cu[j]), local(i, j));
        }
      }
    }
  }
  SparseOperator op(test.num_dofs(), trial.num_dofs());
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

}  // namespace

SparseOperator assemble_form(const FeSpace& trial, const FeSpace& test, FormKind form, double coeff) {
  require_same_mesh(trial, test, "assemble_form");
  if (!std::isfinite(coeff)) throw std::invalid_argument("assemble_form: non-finite coefficient");
  if (form == FormKind::iface_mass) return boundary_mass(trial, test, BoundaryTag::interface, coeff);

  switch (form) {
    case FormKind::mass:
    case FormKind::strain:
    case FormKind::grad:
      if (trial.vdim() != test.vdim()) throw std::invalid_argument("assemble_form: component counts differ");
      if (form == FormKind::strain && trial.vdim() != 2) {
        throw std::invalid_argument("assemble_form: strain form needs vector spaces");
      }
      break;
    case FormKind::div:
      if (trial.vdim() + test.vdim() != 3) {
        throw std::invalid_argument("assemble_form: div form pairs a scalar with a vector space");
      }
      break;
    case FormKind::divdiv:
      if (trial.vdim() != 2 || test.vdim() != 2) {
        throw std::invalid_argument("assemble_form: divdiv form needs vector spaces");
      }
      break;
    case FormKind::iface_mass: break;
  }

  const Mesh& mesh = test.mesh();
  int degree = trial.degree() + test.degree();
  if (form == FormKind::strain || form == FormKind::grad || form == FormKind::divdiv) degree -= 2;
  if (form == FormKind::div) degree -= 1;
  const auto& rule = triangle_rule(std::max(degree, 0));

  const int nu = trial.local_count(), nv = test.local_count();
  const int vu = trial.vdim(), vv = test.vdim();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_triangles()) * nu * nv * vu * vv);
  detail::BasisAt bu, bv;
  // local(c_test * nv + i, c_trial * nu + j)
  Eigen::MatrixXd local(vv * nv, vu * nu);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const detail::TriangleGeometry geo(mesh, t);
    local.setZero();
    for (const auto& q : rule) {
      bu.eval(trial.kind(), geo, q.xi, q.eta);
      bv.eval(test.kind(), geo, q.xi, q.eta);
      const double w = coeff * q.weight * std::abs(geo.det);
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nu; ++j) {
          switch (form) {
            case FormKind::mass:
              for (int c = 0; c < vv; ++c) local(c * nv + i, c * nu + j) += w * bv.phi[i] * bu.phi[j];
              break;
            case FormKind::grad: {
              const double g = w * bv.grad[i].dot(bu.grad[j]);
              for (int c = 0; c < vv; ++c) local(c * nv + i, c * nu + j) += g;
              break;
            }
            case FormKind::strain: {
              const double g = bv.grad[i].dot(bu.grad[j]);
              for (int d = 0; d < 2; ++d) {
                for (int c = 0; c < 2; ++c) {
                  const double val = 0.5 * ((c == d ? g : 0.0) + bu.grad[j](d) * bv.grad[i](c));
                  local(d * nv + i, c * nu + j) += w * val;
                }
              }
              break;
            }
            case FormKind::divdiv:
              for (int d = 0; d < 2; ++d) {
                for (int c = 0; c < 2; ++c) local(d * nv + i, c * nu + j) += w * bu.grad[j](c) * bv.grad[i](d);
              }
              break;
            case FormKind::div:
              if (vv == 1) {
                for (int c = 0; c < 2; ++c) local(i, c * nu + j) += w * bv.phi[i] * bu.grad[j](c);
              } else {
                for (int c = 0; c < 2; ++c) local(c * nv + i, j) += w * bu.phi[j] * bv.grad[i](c);
              }
              break;
            case FormKind::iface_mass: break;
          }
        }
      }
    }
    const auto cu = trial.cell_dofs(t);
    const auto cv = test.cell_dofs(t);
    for (int cd = 0; cd < vv; ++cd) {
      for (int i = 0; i < nv; ++i) {
        const int row = test.dof(cd, cv[i]);
        for (int cc = 0; cc < vu; ++cc) {
          for (int j = 0; j < nu; ++j) {
            const double val = local(cd * nv + i, cc * nu + j);
            if (val != 0.0) trip.emplace_back(row, trial.dof(cc, cu[j]), val);
          }
        }
      }
    }
  }
  SparseOperator op(test.num_dofs(), trial.num_dofs());
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

SparseOperator assemble_boundary_mass(const FeSpace& space, BoundaryTag tag, double coeff) {
  return boundary_mass(space, space, tag, coeff);
}

namespace {

template <class Field>
DofVector load_impl(const FeSpace& space, const Field& f, double t) {
  const Mesh& mesh = space.mesh();
  const auto& rule = triangle_rule(std::max(10, 2 * space.degree() + 1));
  DofVector b = DofVector::Zero(space.num_dofs());
  detail::BasisAt bv;
  for (int tr = 0; tr < mesh.num_triangles(); ++tr) {
    const detail::TriangleGeometry geo(mesh, tr);
    const auto cv = space.cell_dofs(tr);
    for (const auto& q : rule) {
      bv.eval(space.kind(), geo, q.xi, q.eta);
      const auto val = f(geo.map(q.xi, q.eta), t);
      const double w = q.weight * std::abs(geo.det);
      for (int i = 0; i < bv.n; ++i) {
        if constexpr (std::is_same_v<decltype(val), const double>) {
          b(space.dof(0, cv[i])) += w * val * bv.phi[i];
        } else {
          for (int c = 0; c < space.vdim(); ++c) b(space.dof(c, cv[i])) += w * val(c) * bv.phi[i];
        }
      }
    }
  }
  return b;
}

}  // namespace

DofVector assemble_load(const FeSpace& space, const VectorField& f, double t) {
  if (space.vdim() != 2) throw std::invalid_argument("assemble_load: vector field on a scalar space");
  return load_impl(space, f, t);
}

DofVector assemble_load(const FeSpace& space, const ScalarField& f, double t) {
  if (space.vdim() != 1) throw std::invalid_argument("assemble_load: scalar field on a vector space");
  return load_impl(space, f, t);
}

DofVector assemble_boundary_load(const FeSpace& space, BoundaryTag tag, const VectorField& h, double t) {
  if (space.vdim() != 2) throw std::invalid_argument("assemble_boundary_load: needs a vector space");
  const Mesh& mesh = space.mesh();
  const auto& rule = line_rule(std::max(10, 2 * space.degree() + 1));
  DofVector b = DofVector::Zero(space.num_dofs());
  detail::BasisAt bv;
  for (const auto& be : mesh.boundary_edges) {
    if (be.tag != tag) continue;
    const detail::TriangleGeometry geo(mesh, be.triangle);
    const double len = mesh.edge_length(be.edge);
    const auto cv = space.cell_dofs(be.triangle);
    for (const auto& q : rule) {
      const auto r = detail::edge_reference_point(be.local, q.s);
      bv.eval(space.kind(), geo, r[0], r[1]);
      const Eigen::Vector2d val = h(geo.map(r[0], r[1]), t);
      for (int i = 0; i < bv.n; ++i) {
        for (int c = 0; c < 2; ++c) b(space.dof(c, cv[i])) += q.weight * len * val(c) * bv.phi[i];
      }
    }
  }
  return b;
}

DofVector assemble_interface_load(const FeSpace& space, const DofVector& trace_values) {
  const auto& idofs = space.interface_scalar_dofs();
  const int n = static_cast<int>(idofs.size());
  if (trace_values.size() != space.vdim() * n) {
    throw std::invalid_argument("assemble_interface_load: trace-space mismatch (expected " +
                                std::to_string(space.vdim() * n) + " values, got " +
                                std::to_string(trace_values.size()) + ")");
  }
  DofVector ext = DofVector::Zero(space.num_dofs());
  for (int c = 0; c < space.vdim(); ++c) {
    for (int a = 0; a < n; ++a) ext(space.dof(c, idofs[a])) = trace_values(c * n + a);
  }
  return boundary_mass(space, space, BoundaryTag::interface, 1.0) * ext;
}

}  // namespace fsidd
