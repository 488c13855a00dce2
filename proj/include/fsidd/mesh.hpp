#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

namespace fsidd {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag : std::uint8_t {
  gamma_f,    // fluid wall (Dirichlet in the manufactured test)
  gamma_s,    // structure wall
  interface,  // shared fluid/structure boundary
  inlet,
  outlet,
  bottom,
  top,
};

std::string_view to_string(BoundaryTag tag);

enum class Side : std::uint8_t { bottom, right, top, left };

struct Rectangle {
  double x0, y0, x1, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double diameter() const;
};

/// Tag assigned to every edge of one rectangle side.
using BoundarySpec = std::map<Side, BoundaryTag>;

struct Edge {
  std::array<int, 2> v;
};

struct BoundaryEdge {
  int edge;      // index into Mesh::edges
  int triangle;  // the one triangle owning the edge
  int local;     // local edge index inside that triangle (opposite local vertex)
  BoundaryTag tag;
  Side side;
};

/// Conforming triangulation. Triangles are counterclockwise; local edge k of a
/// triangle joins local vertices (k+1)%3 and (k+2)%3.
struct Mesh {
  Rectangle rect{};
  int nx = 0;
  int ny = 0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<BoundaryEdge> boundary_edges;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double signed_area(int triangle) const;
  Point edge_midpoint(int edge) const;
  double edge_length(int edge) const;
  /// Outward unit normal of a boundary edge with respect to its triangle.
  Point outward_normal(const BoundaryEdge& be) const;
  /// Boundary edges carrying `tag`, in storage order.
  std::vector<const BoundaryEdge*> edges_with_tag(BoundaryTag tag) const;
};

/// Uniform nx-by-ny grid of rectangle cells, each split along the
/// lower-left to upper-right diagonal.
Mesh build_structured_mesh(const Rectangle& rect, int nx, int ny, const BoundarySpec& spec);

/// Node pairing between two meshes sharing edges tagged `interface`.
struct InterfaceMap {
  struct Pair {
    int first;   // vertex of the first mesh
    int second;  // vertex of the second mesh
  };
  std::vector<Pair> nodes;          // sorted by arclength along the interface
  std::vector<int> first_edges;     // boundary_edges indices, sorted by arclength
  std::vector<int> second_edges;
  std::vector<double> arclength;    // arclength of each paired node
};

/// Walk along the edges tagged `interface`, starting at the endpoint with the
/// lexicographically smallest (x, y).
struct InterfacePath {
  std::vector<int> nodes;           // vertex ids in walking order
  std::vector<int> boundary_edges;  // boundary_edges indices; edge i joins nodes i and i+1
  std::vector<double> arclength;    // per node
};

InterfacePath trace_interface_path(const Mesh& mesh);

/// Pairs interface vertices by coordinate; throws std::invalid_argument when the
/// node sets disagree (spatially nonmatching interfaces are not supported).
InterfaceMap build_interface_map(const Mesh& first, const Mesh& second);

}  // namespace fsidd
