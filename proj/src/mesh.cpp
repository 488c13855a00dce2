#include "fsidd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace fsidd {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::gamma_f: return "gamma_f";
    case BoundaryTag::gamma_s: return "gamma_s";
    case BoundaryTag::interface: return "interface";
    case BoundaryTag::inlet: return "inlet";
    case BoundaryTag::outlet: return "outlet";
    case BoundaryTag::bottom: return "bottom";
    case BoundaryTag::top: return "top";
  }
  return "unknown";
}

double Rectangle::diameter() const { return std::hypot(width(), height()); }

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Point& a = vertices[tri[0]];
  const Point& b = vertices[tri[1]];
  const Point& c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point Mesh::edge_midpoint(int e) const {
  const Point& a = vertices[edges[e].v[0]];
  const Point& b = vertices[edges[e].v[1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

double Mesh::edge_length(int e) const {
  const Point& a = vertices[edges[e].v[0]];
  const Point& b = vertices[edges[e].v[1]];
  return std::hypot(b.x - a.x, b.y - a.y);
}

Point Mesh::outward_normal(const BoundaryEdge& be) const {
  // Counterclockwise traversal of the owning triangle visits local vertex
  // (k+1)%3 before (k+2)%3; the outward normal is the tangent rotated clockwise.
  const auto& tri = triangles[be.triangle];
  const Point& a = vertices[tri[(be.local + 1) % 3]];
  const Point& b = vertices[tri[(be.local + 2) % 3]];
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  return {dy / len, -dx / len};
}

std::vector<const BoundaryEdge*> Mesh::edges_with_tag(BoundaryTag tag) const {
  std::vector<const BoundaryEdge*> out;
  for (const auto& be : boundary_edges) {
    if (be.tag == tag) out.push_back(&be);
  }
  return out;
}

Mesh build_structured_mesh(const Rectangle& rect, int nx, int ny, const BoundarySpec& spec) {
  if (nx < 1 || ny < 1) {
    std::ostringstream msg;
    msg << "build_structured_mesh: cell counts must be positive (nx=" << nx << ", ny=" << ny << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) {
    std::ostringstream msg;
    msg << "build_structured_mesh: degenerate rectangle [" << rect.x0 << "," << rect.x1 << "]x["
        << rect.y0 << "," << rect.y1 << "]";
    throw std::invalid_argument(msg.str());
  }
  for (Side s : {Side::bottom, Side::right, Side::top, Side::left}) {
    if (!spec.contains(s)) throw std::invalid_argument("build_structured_mesh: boundary spec misses a side");
  }

  Mesh mesh;
  mesh.rect = rect;
  mesh.nx = nx;
  mesh.ny = ny;

  const double hx = rect.width() / nx;
  const double hy = rect.height() / ny;
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    // Pin the last row/column to the exact rectangle bounds.
    const double y = (j == ny) ? rect.y1 : rect.y0 + j * hy;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? rect.x1 : rect.x0 + i * hx;
      mesh.vertices.push_back({x, y});
    }
  }

  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  // Unique edges; key on the sorted vertex pair.
  std::unordered_map<long long, int> edge_index;
  std::vector<int> edge_owner_count;
  std::vector<std::pair<int, int>> edge_first_owner;  // (triangle, local)
  const long long stride = mesh.num_vertices();
  mesh.triangle_edges.resize(mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3];
      int b = tri[(k + 2) % 3];
      const long long key = static_cast<long long>(std::min(a, b)) * stride + std::max(a, b);
      auto [it, inserted] = edge_index.try_emplace(key, mesh.num_edges());
      if (inserted) {
        mesh.edges.push_back({{std::min(a, b), std::max(a, b)}});
        edge_owner_count.push_back(0);
        edge_first_owner.emplace_back(t, k);
      }
      ++edge_owner_count[it->second];
      mesh.triangle_edges[t][k] = it->second;
    }
  }

  const double tol = 1e-12 * rect.diameter();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (edge_owner_count[e] != 1) continue;
    const Point m = mesh.edge_midpoint(e);
    Side side;
    if (std::abs(m.y - rect.y0) < tol) side = Side::bottom;
    else if (std::abs(m.x - rect.x1) < tol) side = Side::right;
    else if (std::abs(m.y - rect.y1) < tol) side = Side::top;
    else if (std::abs(m.x - rect.x0) < tol) side = Side::left;
    else throw std::logic_error("build_structured_mesh: boundary edge off the rectangle boundary");
    const auto [t, k] = edge_first_owner[e];
    mesh.boundary_edges.push_back({e, t, k, spec.at(side), side});
  }
  return mesh;
}

InterfacePath trace_interface_path(const Mesh& mesh) {
  std::map<int, std::vector<int>> incident;  // vertex -> boundary edge ids
  for (int b = 0; b < static_cast<int>(mesh.boundary_edges.size()); ++b) {
    const auto& be = mesh.boundary_edges[b];
    if (be.tag != BoundaryTag::interface) continue;
    for (int v : mesh.edges[be.edge].v) incident[v].push_back(b);
  }
  if (incident.empty()) throw std::invalid_argument("trace_interface_path: mesh has no interface edges");

  int start = -1;
  for (const auto& [v, list] : incident) {
    if (list.size() > 2) throw std::invalid_argument("trace_interface_path: interface is not a simple polyline");
    if (list.size() != 1) continue;
    const Point& p = mesh.vertices[v];
    if (start < 0) {
      start = v;
      continue;
    }
    const Point& q = mesh.vertices[start];
    if (p.x < q.x || (p.x == q.x && p.y < q.y)) start = v;
  }
  if (start < 0) throw std::invalid_argument("trace_interface_path: closed interface curves are not supported");

  InterfacePath line;
  line.nodes.push_back(start);
  line.arclength.push_back(0.0);
  int prev_edge = -1;
  int current = start;
  while (true) {
    int next_edge = -1;
    for (int b : incident[current]) {
      if (b != prev_edge) next_edge = b;
    }
    if (next_edge < 0) break;
    const auto& ev = mesh.edges[mesh.boundary_edges[next_edge].edge].v;
    const int next = (ev[0] == current) ? ev[1] : ev[0];
    line.boundary_edges.push_back(next_edge);
    line.arclength.push_back(line.arclength.back() + mesh.edge_length(mesh.boundary_edges[next_edge].edge));
    line.nodes.push_back(next);
    prev_edge = next_edge;
    current = next;
  }
  if (line.nodes.size() != incident.size()) {
    throw std::invalid_argument("trace_interface_path: interface edges are not connected");
  }
  return line;
}

InterfaceMap build_interface_map(const Mesh& first, const Mesh& second) {
  const InterfacePath a = trace_interface_path(first);
  const InterfacePath b = trace_interface_path(second);
  if (a.nodes.size() != b.nodes.size()) {
    std::ostringstream msg;
    msg << "build_interface_map: unmatched interface nodes (" << a.nodes.size() << " vs " << b.nodes.size() << ")";
    throw std::invalid_argument(msg.str());
  }
  const double tol = 1e-12 * std::max(first.rect.diameter(), second.rect.diameter());
  InterfaceMap map;
  map.nodes.reserve(a.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const Point& p = first.vertices[a.nodes[i]];
    const Point& q = second.vertices[b.nodes[i]];
    if (std::hypot(p.x - q.x, p.y - q.y) > tol) {
      std::ostringstream msg;
      msg << "build_interface_map: unmatched interface node at (" << p.x << ", " << p.y << ")";
      throw std::invalid_argument(msg.str());
    }
    map.nodes.push_back({a.nodes[i], b.nodes[i]});
  }
  map.first_edges = a.boundary_edges;
  map.second_edges = b.boundary_edges;
  map.arclength = a.arclength;
  return map;
}

}  // namespace fsidd
