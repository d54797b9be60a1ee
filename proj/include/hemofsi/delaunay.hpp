//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hemofsi/point.hpp"

namespace hemofsi {

/// Planar straight-line graph: points and marked segments between them.
/// Segments may not cross and may only meet at shared endpoints.
struct Pslg {
  std::vector<Point2> points;
  std::vector<std::array<int, 2>> segments;
  std::vector<int> segment_markers;
};

struct RegionSeed {
  Point2 point;
  int region = 0;
};

struct MeshingOptions {
  /// Target edge length at a point inside the given region.
  std::function<double(const Point2&, int region)> size;
  double min_angle_deg = 20.0;
  std::size_t max_points = 2'000'000;
};

struct MarkedEdge {
  std::array<int, 2> v{};
  int marker = 0;
};

struct Triangulation {
  std::vector<Point2> points;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<int> triangle_regions;
  std::vector<MarkedEdge> segments;  // subsegments of the input segments
};

/// Conforming Delaunay refinement of a PSLG.
///
/// Triangles reachable from a seed without crossing a segment take that
/// seed's region; unreachable triangles are discarded. Triangles are split
/// until every angle is at least `min_angle_deg` and every edge is no
/// longer than the size function. Throws MeshError when the point budget
/// is exhausted or the input is degenerate.
Triangulation triangulate(const Pslg& pslg, std::span<const RegionSeed> seeds,
                          const MeshingOptions& options);

/// Twice the signed area of (a, b, c) in extended precision.
long double orient_exact(const Point2& a, const Point2& b, const Point2& c);
/// Positive when d lies inside the circumcircle of counter-clockwise (a, b, c).
long double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);
Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c);

}  // namespace hemofsi
