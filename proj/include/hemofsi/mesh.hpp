//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hemofsi/point.hpp"

namespace hemofsi {

enum class BoundaryLabel : std::uint8_t {
  Inlet,
  Outlet,
  Interface,
  FixedWall,
  OuterWall,
  ZoneGamma1,
  ZoneGamma2,
};

inline constexpr int kNumBoundaryLabels = 7;

enum class Subdomain : std::uint8_t { Lumen, Wall };

std::string_view to_string(BoundaryLabel label);
std::optional<BoundaryLabel> parse_boundary_label(std::string_view name);

struct BoundaryEdge {
  std::array<int, 2> v{};
  BoundaryLabel label = BoundaryLabel::FixedWall;
};

using Triangle = std::array<int, 3>;

/// Result of point location: containing triangle and barycentric
/// coordinates with respect to its three vertices.
struct PointLocation {
  int triangle = -1;
  std::array<double, 3> bary{};
};

/// Conforming triangle mesh with labelled boundary edges.
///
/// Immutable after construction. The constructor validates the invariants
/// (indices in range, strictly positive counter-clockwise triangles, every
/// topological boundary edge labelled exactly once, labelled interior edges
/// only on Lumen/Wall interfaces) and builds the edge topology used by the
/// degree-2 spaces. Local edge j of a triangle joins vertex j and vertex j+1.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
       std::vector<Subdomain> subdomains, std::vector<BoundaryEdge> boundary_edges);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const Point2& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const std::vector<Subdomain>& subdomains() const { return subdomains_; }
  Subdomain subdomain(int t) const { return subdomains_[static_cast<std::size_t>(t)]; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  const std::array<int, 2>& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  /// Global edge index of local edge j of triangle t.
  int triangle_edge(int t, int j) const { return tri_edges_[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]; }
  /// Triangles on either side of edge e; second entry -1 on the boundary.
  const std::array<int, 2>& edge_triangles(int e) const { return edge_tris_[static_cast<std::size_t>(e)]; }
  /// Triangle across local edge j of t, or -1.
  int neighbor(int t, int j) const;
  std::optional<int> find_edge(int a, int b) const;
  /// Label of edge e when it is a labelled (boundary or interface) edge.
  std::optional<BoundaryLabel> edge_label(int e) const;
  /// Edge indices carrying the given label, in boundary_edges() order.
  std::vector<int> labelled_edges(BoundaryLabel label) const;
  /// Sorted vertex indices touched by edges with the given label.
  std::vector<int> labelled_vertices(BoundaryLabel label) const;

  double area(int t) const;
  Point2 centroid(int t) const;
  double total_area() const;
  double subdomain_area(Subdomain s) const;
  /// 4*sqrt(3)*area / sum of squared edge lengths; 1 for equilateral.
  double quality(int t) const;
  double min_quality() const;
  double min_area() const;

  /// Locate p by walking from `hint`, falling back to an exhaustive scan.
  /// Points on edges belong to one of the adjacent triangles.
  std::optional<PointLocation> locate(const Point2& p, int hint = -1) const;
  /// Closest point on the topological boundary (labelled or not).
  Point2 closest_boundary_point(const Point2& p) const;

  /// Same topology, vertices displaced. Throws MeshError naming the first
  /// triangle whose signed area is no longer positive.
  Mesh moved(std::span<const Point2> displacement) const;
  /// Same topology with every vertex mapped through f (f must preserve
  /// orientation).
  Mesh transformed(const std::function<Point2(const Point2&)>& f) const;

  /// For submeshes: index of each vertex / triangle in the parent mesh.
  const std::vector<int>& parent_vertices() const { return parent_vertices_; }
  const std::vector<int>& parent_triangles() const { return parent_triangles_; }

  /// Triangles of one subdomain with their labels kept (lumen or wall).
  Mesh extract_subdomain(Subdomain s) const;

  /// Submesh on a connected, nonempty triangle set. Boundary edges that
  /// lie on the parent's Interface become ZoneGamma2, every other boundary
  /// edge ZoneGamma1.
  Mesh extract_submesh(std::span<const int> triangles) const;

  /// True when the triangles form a single edge-connected component.
  bool is_connected(std::span<const int> triangles) const;

 private:
  Mesh submesh(std::span<const int> triangles,
               const std::function<std::optional<BoundaryLabel>(std::optional<BoundaryLabel>)>& relabel) const;
  void build_topology();
  void validate() const;
  std::vector<int> labelled_order() const;

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Subdomain> subdomains_;
  std::vector<BoundaryEdge> boundary_edges_;

  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<int> edge_label_;  // -1 when unlabelled
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::vector<int> parent_vertices_;
  std::vector<int> parent_triangles_;
};

/// Plain-text mesh exchange format:
///
///     hemofsi-mesh 1
///     vertices N
///     x y                 (N lines)
///     triangles M
///     a b c subdomain     (M lines, subdomain 0 = lumen, 1 = wall)
///     boundary_edges K
///     a b Label           (K lines, Label as in to_string)
void write_mesh_text(const Mesh& mesh, const std::string& path);
Mesh read_mesh_text(const std::string& path);

/// Structured mesh of the rectangle [x0,x1]x[y0,y1] with nx*ny cells split
/// into two triangles each; `diagonal(i, j)` true selects the "/" diagonal
/// for cell (i, j). Boundary labels by side: bottom, right, top, left.
struct RectangleLabels {
  BoundaryLabel bottom = BoundaryLabel::FixedWall;
  BoundaryLabel right = BoundaryLabel::Outlet;
  BoundaryLabel top = BoundaryLabel::FixedWall;
  BoundaryLabel left = BoundaryLabel::Inlet;
};
Mesh make_rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny,
                         const RectangleLabels& labels = {},
                         Subdomain subdomain = Subdomain::Lumen,
                         const std::function<bool(int, int)>& diagonal = {});

}  // namespace hemofsi
