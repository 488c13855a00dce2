#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fsidd/mesh.hpp"

namespace fsidd {

using DofVector = Eigen::VectorXd;
using SparseOperator = Eigen::SparseMatrix<double>;

using ScalarField = std::function<double(const Point&, double)>;
using VectorField = std::function<Eigen::Vector2d(const Point&, double)>;
using ScalarGradient = std::function<Eigen::Vector2d(const Point&, double)>;
/// Row i holds the gradient of component i.
using VectorGradient = std::function<Eigen::Matrix2d(const Point&, double)>;

// ---------------------------------------------------------------------------
// Quadrature

/// Point on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
struct TriangleQuadPoint {
  double xi;
  double eta;
  double weight;
};

/// Rule exact for polynomials of total degree <= `degree`.
const std::vector<TriangleQuadPoint>& triangle_rule(int degree);

/// Point on [0, 1]; weights sum to 1.
struct LineQuadPoint {
  double s;
  double weight;
};

/// Gauss-Legendre rule on [0,1] with `n` points (exact to degree 2n-1).
std::vector<LineQuadPoint> gauss_legendre(int n);
const std::vector<LineQuadPoint>& line_rule(int degree);

// ---------------------------------------------------------------------------
// Reference elements

enum class ElementKind { P0, P1, P2, P1_bubble };

const char* to_string(ElementKind kind);
int polynomial_degree(ElementKind kind);
int local_dof_count(ElementKind kind);

/// Basis values and reference gradients at (xi, eta). Local ordering: P1 uses
/// the three vertices; P2 appends the three edge midpoints (local edge k is
/// opposite vertex k); P1_bubble appends the cubic bubble 27*l0*l1*l2.
void eval_reference_basis(ElementKind kind, double xi, double eta, std::span<double> values,
                          std::span<Eigen::Vector2d> grads);

// ---------------------------------------------------------------------------
// Spaces

/// Lagrange-type finite element space with `vdim` components. Vector dofs are
/// component-blocked: dof(c, s) = c * num_scalar_dofs() + s.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, ElementKind kind, int vdim);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  ElementKind kind() const { return kind_; }
  int vdim() const { return vdim_; }
  int degree() const { return polynomial_degree(kind_); }
  int local_count() const { return local_dof_count(kind_); }
  int num_scalar_dofs() const { return num_scalar_; }
  int num_dofs() const { return vdim_ * num_scalar_; }
  int dof(int comp, int scalar) const { return comp * num_scalar_ + scalar; }

  /// Scalar dof ids of a triangle in local basis order.
  std::span<const int> cell_dofs(int triangle) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(triangle) * local_count(),
            static_cast<std::size_t>(local_count())};
  }
  /// Interpolation node of a scalar dof (centroid for bubbles and P0).
  const Point& node(int scalar) const { return nodes_[scalar]; }
  /// Sorted scalar dofs lying on edges with `tag` (endpoints included).
  std::vector<int> boundary_scalar_dofs(BoundaryTag tag) const;
  /// Scalar dofs on the interface, ordered by arclength along the walk of
  /// trace_interface_path(). Empty if the mesh has no interface edges.
  const std::vector<int>& interface_scalar_dofs() const { return interface_dofs_; }
  /// Scalar dofs (local ordering on the edge) carried by boundary edge `be`.
  std::vector<int> edge_scalar_dofs(const BoundaryEdge& be) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  ElementKind kind_;
  int vdim_;
  int num_scalar_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<Point> nodes_;
  std::vector<int> interface_dofs_;
};

// ---------------------------------------------------------------------------
// Assembly

enum class FormKind {
  mass,        // coeff (u, v)
  strain,      // coeff (D(u), D(v)); pass 2*nu for the viscous/elastic form
  grad,        // coeff (grad u, grad v)
  div,         // coeff (q, div v); one space scalar, the other vector
  divdiv,      // coeff (div u, div v)
  iface_mass,  // coeff (u, v)_Gamma over edges tagged interface
};

/// Bilinear form with rows indexed by `test` dofs and columns by `trial` dofs.
/// Both spaces must live on the same mesh. Quadrature is exact for the
/// polynomial degree of the integrand on affine triangles.
SparseOperator assemble_form(const FeSpace& trial, const FeSpace& test, FormKind form, double coeff);

/// coeff (u, v) over the boundary edges tagged `tag`.
SparseOperator assemble_boundary_mass(const FeSpace& space, BoundaryTag tag, double coeff);

/// (f, v) with a rule of degree max(10, 2p+1).
DofVector assemble_load(const FeSpace& space, const VectorField& f, double t);
DofVector assemble_load(const FeSpace& space, const ScalarField& f, double t);

/// (h, v) over edges tagged `tag`; used for prescribed tractions.
DofVector assemble_boundary_load(const FeSpace& space, BoundaryTag tag, const VectorField& h, double t);

/// (g_h, v)_Gamma where g_h is the interface trace function with nodal values
/// `trace_values`, laid out component-blocked over interface_scalar_dofs().
DofVector assemble_interface_load(const FeSpace& space, const DofVector& trace_values);

// ---------------------------------------------------------------------------
// Essential boundary conditions

/// Symmetric elimination of a fixed set of dofs. The coupling columns of the
/// original operator are kept so right-hand sides can be lifted repeatedly
/// against one factorization.
class EssentialConstraints {
 public:
  EssentialConstraints() = default;
  EssentialConstraints(int size, std::vector<int> dofs);

  const std::vector<int>& dofs() const { return dofs_; }
  bool is_constrained(int dof) const { return mask_[dof]; }
  int size() const { return static_cast<int>(mask_.size()); }

  /// Zero constrained rows and columns, put 1 on their diagonal, and remember
  /// the eliminated columns for lift().
  SparseOperator eliminate(const SparseOperator& op);
  /// rhs -= A(:,c) * values on free rows; rhs(c) = values. Requires eliminate().
  void lift(DofVector& rhs, const DofVector& values) const;
  /// rhs(c) = 0, leaving free rows untouched.
  void zero(DofVector& rhs) const;

 private:
  std::vector<int> dofs_;
  std::vector<char> mask_;
  SparseOperator coupling_;  // size x |dofs|, free rows only
};

struct Constrained {
  SparseOperator op;
  DofVector rhs;
};

/// One-shot version: eliminate `dofs` from (op, rhs) with prescribed values.
Constrained apply_essential_bc(const SparseOperator& op, const DofVector& rhs, const std::vector<int>& dofs,
                               const DofVector& values);

/// Vector dofs (both components) on the listed tags, plus the given vertices.
std::vector<int> dirichlet_dofs(const FeSpace& space, std::span<const BoundaryTag> tags,
                                std::span<const int> pinned_vertices = {});

// ---------------------------------------------------------------------------
// Interpolation, evaluation and errors

DofVector interpolate(const FeSpace& space, const VectorField& f, double t);
DofVector interpolate(const FeSpace& space, const ScalarField& f, double t);

/// Value of a vector-valued FE function at `p` (linear search over triangles).
Eigen::Vector2d evaluate(const FeSpace& space, const DofVector& coeffs, const Point& p);

enum class Norm { L2, H1_semi };

struct VectorExact {
  VectorField value;
  VectorGradient gradient;
};

struct ScalarExact {
  ScalarField value;
  ScalarGradient gradient;
};

/// ||u_h - u||; quadrature degree 2p+3.
double error_norm(const FeSpace& space, const DofVector& coeffs, const VectorExact& exact, double t, Norm norm);
double error_norm(const FeSpace& space, const DofVector& coeffs, const ScalarExact& exact, double t, Norm norm);

}  // namespace fsidd
