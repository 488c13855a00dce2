#pragma once

#include <Eigen/Dense>

#include <array>

#include "fsidd/fem.hpp"

namespace fsidd::detail {

constexpr int kMaxLocal = 6;

struct TriangleGeometry {
  std::array<Point, 3> v;
  Eigen::Matrix2d jac;     // columns v1 - v0, v2 - v0
  Eigen::Matrix2d inv_jt;  // J^{-T}
  double det = 0.0;

  TriangleGeometry(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) v[k] = mesh.vertices[tri[k]];
    jac << v[1].x - v[0].x, v[2].x - v[0].x, v[1].y - v[0].y, v[2].y - v[0].y;
    det = jac.determinant();
    inv_jt = jac.inverse().transpose();
  }

  double area() const { return 0.5 * std::abs(det); }

  Point map(double xi, double eta) const {
    return {v[0].x + jac(0, 0) * xi + jac(0, 1) * eta, v[0].y + jac(1, 0) * xi + jac(1, 1) * eta};
  }
};

/// Basis values and physical gradients of one element at one reference point.
struct BasisAt {
  int n = 0;
  std::array<double, kMaxLocal> phi{};
  std::array<Eigen::Vector2d, kMaxLocal> grad{};

  void eval(ElementKind kind, const TriangleGeometry& g, double xi, double eta) {
    n = local_dof_count(kind);
    std::array<Eigen::Vector2d, kMaxLocal> ref;
    eval_reference_basis(kind, xi, eta, std::span<double>(phi.data(), n), std::span<Eigen::Vector2d>(ref.data(), n));
    for (int i = 0; i < n; ++i) grad[i] = g.inv_jt * ref[i];
  }
};

/// Reference coordinates of the point at parameter s along local edge k,
/// running from local vertex (k+1)%3 to (k+2)%3.
inline std::array<double, 2> edge_reference_point(int k, double s) {
  static constexpr double rx[3] = {0.0, 1.0, 0.0};
  static constexpr double ry[3] = {0.0, 0.0, 1.0};
  const int a = (k + 1) % 3;
  const int b = (k + 2) % 3;
  return {(1.0 - s) * rx[a] + s * rx[b], (1.0 - s) * ry[a] + s * ry[b]};
}

}  // namespace fsidd::detail
