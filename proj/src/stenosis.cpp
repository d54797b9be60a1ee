//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/stenosis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hemofsi/delaunay.hpp"
#include "hemofsi/error.hpp"

namespace hemofsi {

namespace {

enum Marker : int {
  kInlet = 1,
  kOutlet,
  kInterface,
  kLowerOuter,
  kUpperOuter,
  kLowerCaps,
  kUpperCaps,
};

void require(bool ok, const char* param, const std::string& what) {
  if (!ok) throw MeshError(std::string("geometry.") + param + ": " + what);
}

// Uniform subdivision of [a, b] with spacing at most h, endpoints included
// except b.
void append_range(std::vector<double>& xs, double a, double b, double h) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
  for (int i = 0; i < n; ++i) xs.push_back(a + (b - a) * i / n);
}

}  // namespace

void StenosisGeometry::validate() const {
  require(std::isfinite(length) && length > 0.0, "length", "must be positive");
  require(std::isfinite(height) && height > 0.0, "height", "must be positive");
  require(std::isfinite(wall_thickness) && wall_thickness > 0.0, "wall_thickness", "must be positive");
  require(occlusion > 0.0 && occlusion < 1.0, "occlusion", "must lie in (0, 1)");
  require(bump_half_width > 0.0 && bump_half_width < 0.5 * length, "bump_half_width",
          "must lie in (0, L/2)");
  require(mesh_size > 0.0 && mesh_size < height, "mesh_size", "must lie in (0, H)");
  require(bump_center - bump_half_width > 0.0 && bump_center + bump_half_width < length,
          "bump_center", "bump must lie strictly inside the channel");
}

double StenosisGeometry::bump(double x) const {
  const double s = (x - bump_center) / bump_half_width;
  if (std::abs(s) >= 1.0) return 0.0;
  return 0.5 * occlusion * height * (1.0 + std::cos(std::numbers::pi * s));
}

double StenosisGeometry::bump_area() const { return occlusion * height * bump_half_width; }

double StenosisGeometry::total_area() const {
  return length * height + 2.0 * length * wall_thickness - bump_area();
}

double StenosisGeometry::wall_mesh_size() const { return std::min(mesh_size, 0.5 * wall_thickness); }

Mesh build_stenosed_artery(const StenosisGeometry& geom) {
  geom.validate();
  const double L = geom.length;
  const double H = geom.height;
  const double hw = geom.wall_thickness;
  const double hs = geom.wall_mesh_size();
  const double x0 = geom.bump_center - geom.bump_half_width;
  const double x1 = geom.bump_center + geom.bump_half_width;

  std::vector<double> xs;
  append_range(xs, 0.0, x0, hs);
  append_range(xs, x0, x1, std::min(hs, geom.bump_half_width / 16.0));
  append_range(xs, x1, L, hs);
  xs.push_back(L);
  const int nx = static_cast<int>(xs.size());

  // Four horizontal polylines sharing the x-nodes: lower outer, lower
  // interface, upper interface, upper outer.
  Pslg pslg;
  const auto line = [&](auto y_of) {
    const int base = static_cast<int>(pslg.points.size());
    for (double x : xs) pslg.points.push_back({x, y_of(x)});
    return base;
  };
  const int lo = line([&](double x) { return geom.bump(x) - hw; });
  const int li = line([&](double x) { return geom.bump(x); });
  const int ui = line([&](double) { return H; });
  const int uo = line([&](double) { return H + hw; });

  const auto seg = [&](int a, int b, int marker) {
    pslg.segments.push_back({a, b});
    pslg.segment_markers.push_back(marker);
  };
  for (int i = 0; i + 1 < nx; ++i) {
    seg(lo + i, lo + i + 1, kLowerOuter);
    seg(li + i, li + i + 1, kInterface);
    seg(ui + i, ui + i + 1, kInterface);
    seg(uo + i, uo + i + 1, kUpperOuter);
  }
  // Vertical ends: wall caps and the lumen inlet/outlet, each subdivided.
  const auto vertical = [&](int a, int b, double spacing, int marker) {
    const Point2 pa = pslg.points[static_cast<std::size_t>(a)];
    const Point2 pb = pslg.points[static_cast<std::size_t>(b)];
    const int n = std::max(1, static_cast<int>(std::ceil(distance(pa, pb) / spacing - 1e-9)));
    int prev = a;
    for (int k = 1; k < n; ++k) {
      const int id = static_cast<int>(pslg.points.size());
      pslg.points.push_back(pa + (static_cast<double>(k) / n) * (pb - pa));
      seg(prev, id, marker);
      prev = id;
    }
    seg(prev, b, marker);
  };
  const int last = nx - 1;
  vertical(lo, li, hs, kLowerCaps);
  vertical(lo + last, li + last, hs, kLowerCaps);
  vertical(ui, uo, hs, kUpperCaps);
  vertical(ui + last, uo + last, hs, kUpperCaps);
  vertical(li, ui, geom.mesh_size, kInlet);
  vertical(li + last, ui + last, geom.mesh_size, kOutlet);

  const double xs_seed = 0.5 * x0;
  const std::array<RegionSeed, 3> seeds{RegionSeed{{xs_seed, 0.5 * H}, 0},
                                        RegionSeed{{xs_seed, -0.5 * hw}, 1},
                                        RegionSeed{{xs_seed, H + 0.5 * hw}, 1}};
  MeshingOptions opts;
  opts.size = [&](const Point2&, int region) { return region == 0 ? geom.mesh_size : hs; };
  opts.max_points = 4'000'000;

  Triangulation tri;
  try {
    tri = triangulate(pslg, seeds, opts);
  } catch (const MeshError& e) {
    throw MeshError(std::string("mesh generation failed (mesh_size=") +
                    std::to_string(geom.mesh_size) + ", occlusion=" +
                    std::to_string(geom.occlusion) + "): " + e.what());
  }

  const bool outer_fixed = geom.support == WallSupport::Outer;
  const BoundaryLabel surface = outer_fixed ? BoundaryLabel::FixedWall : BoundaryLabel::OuterWall;
  const BoundaryLabel caps = outer_fixed ? BoundaryLabel::OuterWall : BoundaryLabel::FixedWall;
  std::vector<BoundaryEdge> edges;
  edges.reserve(tri.segments.size());
  for (const auto& s : tri.segments) {
    BoundaryLabel label = BoundaryLabel::Interface;
    switch (s.marker) {
      case kInlet: label = BoundaryLabel::Inlet; break;
      case kOutlet: label = BoundaryLabel::Outlet; break;
      case kInterface: label = BoundaryLabel::Interface; break;
      case kLowerOuter:
      case kUpperOuter: label = surface; break;
      default: label = caps; break;
    }
    edges.push_back({s.v, label});
  }
  std::vector<Subdomain> subs;
  subs.reserve(tri.triangle_regions.size());
  for (int r : tri.triangle_regions) subs.push_back(r == 0 ? Subdomain::Lumen : Subdomain::Wall);
  return Mesh(std::move(tri.points), std::move(tri.triangles), std::move(subs), std::move(edges));
}

}  // namespace hemofsi
