#include <algorithm>
#include <stdexcept>

#include "fsidd/fem.hpp"

namespace fsidd {

const char* to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::P0: return "P0";
    case ElementKind::P1: return "P1";
    case ElementKind::P2: return "P2";
    case ElementKind::P1_bubble: return "P1_bubble";
  }
  return "unknown";
}

int polynomial_degree(ElementKind kind) {
  switch (kind) {
    case ElementKind::P0: return 0;
    case ElementKind::P1: return 1;
    case ElementKind::P2: return 2;
    case ElementKind::P1_bubble: return 3;
  }
  throw std::invalid_argument("polynomial_degree: invalid element kind");
}

int local_dof_count(ElementKind kind) {
  switch (kind) {
    case ElementKind::P0: return 1;
    case ElementKind::P1: return 3;
    case ElementKind::P2: return 6;
    case ElementKind::P1_bubble: return 4;
  }
  throw std::invalid_argument("local_dof_count: invalid element kind");
}

void eval_reference_basis(ElementKind kind, double xi, double eta, std::span<double> values,
                          std::span<Eigen::Vector2d> grads) {
  const double l[3] = {1.0 - xi - eta, xi, eta};
  const Eigen::Vector2d dl[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  switch (kind) {
    case ElementKind::P0:
      values[0] = 1.0;
      grads[0].setZero();
      return;
    case ElementKind::P1:
      for (int i = 0; i < 3; ++i) {
        values[i] = l[i];
        grads[i] = dl[i];
      }
      return;
    case ElementKind::P2:
      for (int i = 0; i < 3; ++i) {
        values[i] = l[i] * (2.0 * l[i] - 1.0);
        grads[i] = (4.0 * l[i] - 1.0) * dl[i];
      }
      for (int k = 0; k < 3; ++k) {
        const int a = (k + 1) % 3, b = (k + 2) % 3;
        values[3 + k] = 4.0 * l[a] * l[b];
        grads[3 + k] = 4.0 * (l[a] * dl[b] + l[b] * dl[a]);
      }
      return;
    case ElementKind::P1_bubble:
      for (int i = 0; i < 3; ++i) {
        values[i] = l[i];
        grads[i] = dl[i];
      }
      values[3] = 27.0 * l[0] * l[1] * l[2];
      grads[3] = 27.0 * (dl[0] * l[1] * l[2] + l[0] * dl[1] * l[2] + l[0] * l[1] * dl[2]);
      return;
  }
  throw std::invalid_argument("eval_reference_basis: invalid element kind");
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, ElementKind kind, int vdim)
    : mesh_(std::move(mesh)), kind_(kind), vdim_(vdim) {
  if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
  if (vdim_ != 1 && vdim_ != 2) throw std::invalid_argument("FeSpace: vdim must be 1 or 2");
  const Mesh& m = *mesh_;
  const int nv = m.num_vertices();
  const int nt = m.num_triangles();
  const int lc = local_count();
  cell_dofs_.resize(static_cast<std::size_t>(nt) * lc);

  auto centroid = [&m](int t) {
    const auto& tri = m.triangles[t];
    Point c;
    for (int v : tri) {
      c.x += m.vertices[v].x / 3.0;
      c.y += m.vertices[v].y / 3.0;
    }
    return c;
  };

  switch (kind_) {
    case ElementKind::P0:
      num_scalar_ = nt;
      for (int t = 0; t < nt; ++t) {
        cell_dofs_[t] = t;
        nodes_.push_back(centroid(t));
      }
      break;
    case ElementKind::P1:
    case ElementKind::P1_bubble:
    case ElementKind::P2: {
      nodes_ = m.vertices;
      for (int t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) cell_dofs_[t * lc + k] = m.triangles[t][k];
      }
      if (kind_ == ElementKind::P2) {
        for (int e = 0; e < m.num_edges(); ++e) nodes_.push_back(m.edge_midpoint(e));
        for (int t = 0; t < nt; ++t) {
          for (int k = 0; k < 3; ++k) cell_dofs_[t * lc + 3 + k] = nv + m.triangle_edges[t][k];
        }
      } else if (kind_ == ElementKind::P1_bubble) {
        for (int t = 0; t < nt; ++t) {
          nodes_.push_back(centroid(t));
          cell_dofs_[t * lc + 3] = nv + t;
        }
      }
      num_scalar_ = static_cast<int>(nodes_.size());
      break;
    }
  }

  const bool has_interface = std::any_of(m.boundary_edges.begin(), m.boundary_edges.end(),
                                         [](const BoundaryEdge& be) { return be.tag == BoundaryTag::interface; });
  if (has_interface && kind_ != ElementKind::P0) {
    const InterfacePath path = trace_interface_path(m);
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
      interface_dofs_.push_back(path.nodes[i]);
      if (kind_ == ElementKind::P2 && i < path.boundary_edges.size()) {
        interface_dofs_.push_back(nv + m.boundary_edges[path.boundary_edges[i]].edge);
      }
    }
  }
}

std::vector<int> FeSpace::edge_scalar_dofs(const BoundaryEdge& be) const {
  if (kind_ == ElementKind::P0) return {};
  const auto& tri = mesh_->triangles[be.triangle];
  std::vector<int> out{tri[(be.local + 1) % 3], tri[(be.local + 2) % 3]};
  if (kind_ == ElementKind::P2) out.push_back(mesh_->num_vertices() + be.edge);
  return out;
}

std::vector<int> FeSpace::boundary_scalar_dofs(BoundaryTag tag) const {
  std::vector<int> out;
  for (const auto& be : mesh_->boundary_edges) {
    if (be.tag != tag) continue;
    for (int d : edge_scalar_dofs(be)) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace fsidd
