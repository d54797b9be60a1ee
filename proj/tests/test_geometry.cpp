//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include "hemofsi/delaunay.hpp"
#include "hemofsi/error.hpp"
#include "hemofsi/mesh.hpp"
#include "hemofsi/stenosis.hpp"

using namespace hemofsi;

namespace {

StenosisGeometry default_geometry() {
  StenosisGeometry g;
  g.length = 6.0;
  g.height = 1.0;
  g.wall_thickness = 0.1;
  g.bump_center = 3.0;
  g.bump_half_width = 0.75;
  g.occlusion = 0.4;
  g.mesh_size = 0.1;
  return g;
}

double min_angle_deg(const Mesh& m, int t) {
  const auto& tri = m.triangle(t);
  double best = 180.0;
  for (int i = 0; i < 3; ++i) {
    const Point2 a = m.vertex(tri[static_cast<std::size_t>(i)]);
    const Point2 b = m.vertex(tri[static_cast<std::size_t>((i + 1) % 3)]);
    const Point2 c = m.vertex(tri[static_cast<std::size_t>((i + 2) % 3)]);
    const double ang = std::acos(std::clamp(dot(b - a, c - a) / (norm(b - a) * norm(c - a)), -1.0, 1.0));
    best = std::min(best, ang * 180.0 / std::numbers::pi);
  }
  return best;
}

// Boundary edges must partition the topological boundary.
void check_labels_partition_boundary(const Mesh& m) {
  std::size_t boundary = 0;
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    if (m.edge_triangles(static_cast<int>(e))[1] < 0) {
      ++boundary;
      CHECK(m.edge_label(static_cast<int>(e)).has_value());
    }
  }
  std::size_t labelled_boundary = 0;
  for (const auto& be : m.boundary_edges()) {
    const auto e = m.find_edge(be.v[0], be.v[1]);
    REQUIRE(e.has_value());
    if (m.edge_triangles(*e)[1] < 0) ++labelled_boundary;
  }
  CHECK(labelled_boundary == boundary);
}

}  // namespace

TEST_CASE("rectangle mesh topology and labels") {
  const Mesh m = make_rectangle_mesh(0, 2, 0, 1, 4, 2);
  CHECK(m.num_vertices() == 15);
  CHECK(m.num_triangles() == 16);
  CHECK(m.num_edges() == 15 + 16 - 1);
  CHECK(m.total_area() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m.labelled_edges(BoundaryLabel::Inlet).size() == 2);
  CHECK(m.labelled_edges(BoundaryLabel::Outlet).size() == 2);
  CHECK(m.labelled_edges(BoundaryLabel::FixedWall).size() == 8);
  check_labels_partition_boundary(m);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    for (int j = 0; j < 3; ++j) {
      const int n = m.neighbor(static_cast<int>(t), j);
      if (n < 0) continue;
      bool back = false;
      for (int k = 0; k < 3; ++k) back = back || m.neighbor(n, k) == static_cast<int>(t);
      CHECK(back);
    }
  }
}

TEST_CASE("mesh validation rejects bad input") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<BoundaryEdge> edges{{{0, 1}, BoundaryLabel::FixedWall},
                                        {{1, 2}, BoundaryLabel::FixedWall},
                                        {{2, 0}, BoundaryLabel::FixedWall}};
  CHECK_NOTHROW(Mesh(pts, {{0, 1, 2}}, {}, edges));
  CHECK_THROWS_AS(Mesh(pts, {{0, 2, 1}}, {}, edges), MeshError);
  CHECK_THROWS_AS(Mesh(pts, {{0, 1, 3}}, {}, edges), MeshError);
  CHECK_THROWS_AS(Mesh(pts, {{0, 1, 2}}, {}, {edges[0], edges[1]}), MeshError);
  CHECK_THROWS_AS(Mesh({{0, 0}, {1, 0}, {0, NAN}}, {{0, 1, 2}}, {}, edges), MeshError);
}

TEST_CASE("point location walks and reports outside points") {
  const Mesh m = make_rectangle_mesh(0, 1, 0, 1, 8, 8);
  for (const Point2 p : {Point2{0.31, 0.77}, Point2{0.999, 0.001}, Point2{0.5, 0.5}, Point2{0.0, 0.0}}) {
    const auto loc = m.locate(p, 3);
    REQUIRE(loc.has_value());
    const auto& tri = m.triangle(loc->triangle);
    Point2 q{};
    for (int i = 0; i < 3; ++i) q += loc->bary[static_cast<std::size_t>(i)] * m.vertex(tri[static_cast<std::size_t>(i)]);
    CHECK(distance(p, q) < 1e-14);
  }
  CHECK_FALSE(m.locate({1.2, 0.5}).has_value());
  const Point2 c = m.closest_boundary_point({-0.3, 0.4});
  CHECK(c.x == doctest::Approx(0.0));
  CHECK(c.y == doctest::Approx(0.4));
}

TEST_CASE("moving a mesh") {
  const Mesh m = make_rectangle_mesh(0, 1, 0, 1, 3, 3);
  SUBCASE("zero displacement gives an identical mesh") {
    const std::vector<Point2> zero(m.num_vertices());
    const Mesh moved = m.moved(zero);
    CHECK(moved.vertices() == m.vertices());
    CHECK(moved.triangles() == m.triangles());
  }
  SUBCASE("uniform shift keeps areas") {
    const std::vector<Point2> d(m.num_vertices(), Point2{0.25, 0.0});
    const Mesh moved = m.moved(d);
    for (std::size_t i = 0; i < m.num_vertices(); ++i) {
      CHECK(moved.vertices()[i].x == doctest::Approx(m.vertices()[i].x + 0.25));
    }
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
      CHECK(moved.area(static_cast<int>(t)) == doctest::Approx(m.area(static_cast<int>(t))).epsilon(1e-12));
    }
    CHECK(moved.boundary_edges().size() == m.boundary_edges().size());
  }
  SUBCASE("flipping a triangle is reported") {
    std::vector<Point2> d(m.num_vertices());
    d[5] = {2.0, 2.0};
    CHECK_THROWS_WITH_AS(m.moved(d), doctest::Contains("inverts triangle"), MeshError);
  }
}

TEST_CASE("stenosed artery mesh") {
  const StenosisGeometry g = default_geometry();
  const Mesh m = build_stenosed_artery(g);
  std::size_t lumen = 0, wall = 0;
  for (auto s : m.subdomains()) (s == Subdomain::Lumen ? lumen : wall)++;
  CHECK(lumen > 0);
  CHECK(wall > 0);
  CHECK_FALSE(m.labelled_edges(BoundaryLabel::Interface).empty());
  CHECK_FALSE(m.labelled_edges(BoundaryLabel::Inlet).empty());
  CHECK_FALSE(m.labelled_edges(BoundaryLabel::Outlet).empty());
  CHECK_FALSE(m.labelled_edges(BoundaryLabel::FixedWall).empty());
  CHECK_FALSE(m.labelled_edges(BoundaryLabel::OuterWall).empty());
  check_labels_partition_boundary(m);
  CHECK(m.min_area() > 0.0);

  // Analytic area: the bump integrates to beta*H*w_b.
  const double area = g.length * g.height + 2.0 * g.length * g.wall_thickness -
                      g.occlusion * g.height * g.bump_half_width;
  CHECK(std::abs(m.total_area() - area) / area < 0.01);

  double worst = 180.0;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) worst = std::min(worst, min_angle_deg(m, static_cast<int>(t)));
  CHECK(worst >= 20.0 - 1e-9);

  // Interface edges separate lumen from wall.
  for (int e : m.labelled_edges(BoundaryLabel::Interface)) {
    const auto tris = m.edge_triangles(e);
    REQUIRE(tris[1] >= 0);
    CHECK(m.subdomain(tris[0]) != m.subdomain(tris[1]));
  }
  // Bump apex raises the lumen floor.
  double floor_at_apex = 1.0;
  for (int v : m.labelled_vertices(BoundaryLabel::Interface)) {
    const Point2& p = m.vertex(v);
    if (std::abs(p.x - g.bump_center) < 1e-12 && p.y < 0.5) floor_at_apex = p.y;
  }
  CHECK(floor_at_apex == doctest::Approx(g.occlusion * g.height));
}

TEST_CASE("near-zero occlusion gives a straight, well-shaped channel") {
  StenosisGeometry g = default_geometry();
  g.occlusion = 1e-6;
  const Mesh m = build_stenosed_artery(g);
  CHECK(m.min_quality() > 0.3);
  CHECK(std::abs(m.total_area() - g.total_area()) / g.total_area() < 0.01);
}

TEST_CASE("wall support selects clamped boundaries") {
  StenosisGeometry g = default_geometry();
  g.mesh_size = 0.2;
  const Mesh outer = build_stenosed_artery(g);
  g.support = WallSupport::Ends;
  const Mesh ends = build_stenosed_artery(g);
  double fixed_outer = 0.0, fixed_ends = 0.0;
  for (int e : outer.labelled_edges(BoundaryLabel::FixedWall)) {
    fixed_outer += distance(outer.vertex(outer.edge(e)[0]), outer.vertex(outer.edge(e)[1]));
  }
  for (int e : ends.labelled_edges(BoundaryLabel::FixedWall)) {
    fixed_ends += distance(ends.vertex(ends.edge(e)[0]), ends.vertex(ends.edge(e)[1]));
  }
  // The lower outer surface is the interface shifted down, so same length.
  double interface = 0.0;
  for (int e : outer.labelled_edges(BoundaryLabel::Interface)) {
    interface += distance(outer.vertex(outer.edge(e)[0]), outer.vertex(outer.edge(e)[1]));
  }
  CHECK(fixed_outer == doctest::Approx(interface).epsilon(1e-12));
  CHECK(fixed_outer > 2.0 * g.length);
  CHECK(fixed_ends == doctest::Approx(4.0 * g.wall_thickness).epsilon(1e-9));
}

TEST_CASE("geometry validation names the parameter") {
  StenosisGeometry g = default_geometry();
  g.occlusion = 1.2;
  CHECK_THROWS_WITH_AS(build_stenosed_artery(g), doctest::Contains("occlusion"), MeshError);
  g = default_geometry();
  g.mesh_size = 2.0;
  CHECK_THROWS_WITH_AS(build_stenosed_artery(g), doctest::Contains("mesh_size"), MeshError);
  g = default_geometry();
  g.bump_center = 0.5;
  CHECK_THROWS_WITH_AS(build_stenosed_artery(g), doctest::Contains("bump_center"), MeshError);
}

TEST_CASE("extracting submeshes") {
  const Mesh m = build_stenosed_artery([] {
    StenosisGeometry g = default_geometry();
    g.mesh_size = 0.2;
    return g;
  }());
  std::vector<int> lumen;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    if (m.subdomain(static_cast<int>(t)) == Subdomain::Lumen) lumen.push_back(static_cast<int>(t));
  }
  const Mesh sub = m.extract_subdomain(Subdomain::Lumen);
  const Mesh zone = m.extract_submesh(lumen);
  CHECK(zone.vertices() == sub.vertices());
  CHECK(zone.triangles() == sub.triangles());
  CHECK(zone.labelled_edges(BoundaryLabel::ZoneGamma2).size() ==
        sub.labelled_edges(BoundaryLabel::Interface).size());
  CHECK(zone.labelled_edges(BoundaryLabel::ZoneGamma1).size() ==
        sub.labelled_edges(BoundaryLabel::Inlet).size() + sub.labelled_edges(BoundaryLabel::Outlet).size());
  for (std::size_t v = 0; v < sub.num_vertices(); ++v) {
    CHECK(m.vertex(sub.parent_vertices()[v]) == sub.vertex(static_cast<int>(v)));
  }

  SUBCASE("single interior triangle") {
    int interior = -1;
    for (int t : lumen) {
      bool touches = false;
      for (int j = 0; j < 3; ++j) touches = touches || m.edge_label(m.triangle_edge(t, j)).has_value();
      if (!touches) {
        interior = t;
        break;
      }
    }
    REQUIRE(interior >= 0);
    const Mesh one = m.extract_submesh(std::vector<int>{interior});
    CHECK(one.num_triangles() == 1);
    CHECK(one.labelled_edges(BoundaryLabel::ZoneGamma1).size() == 3);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(m.extract_submesh(std::vector<int>{}), MeshError);
    CHECK_THROWS_WITH_AS(m.extract_submesh(std::vector<int>{lumen.front(), lumen.back()}),
                         doctest::Contains("disconnected"), MeshError);
  }
}

TEST_CASE("strip touching the interface is classified edge by edge") {
  // 5x1 cells of a 5x2 lumen over a wall row; the strip is the bottom
  // lumen row (10 triangles), its floor lies on the Interface.
  const Mesh base = make_rectangle_mesh(0, 5, -1, 2, 5, 3);
  std::vector<Subdomain> subs;
  for (std::size_t t = 0; t < base.num_triangles(); ++t) {
    subs.push_back(base.centroid(static_cast<int>(t)).y < 0 ? Subdomain::Wall : Subdomain::Lumen);
  }
  std::vector<BoundaryEdge> edges = base.boundary_edges();
  for (int i = 0; i < 5; ++i) edges.push_back({{6 + i, 6 + i + 1}, BoundaryLabel::Interface});
  const Mesh m(base.vertices(), base.triangles(), subs, edges);

  std::vector<int> strip;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const double y = m.centroid(static_cast<int>(t)).y;
    if (y > 0 && y < 1) strip.push_back(static_cast<int>(t));
  }
  REQUIRE(strip.size() == 10);
  const Mesh zone = m.extract_submesh(strip);
  // Hand classification: 5 floor edges on the interface, 5 ceiling edges
  // plus 2 end edges elsewhere.
  std::size_t g1 = 0, g2 = 0;
  for (const auto& be : zone.boundary_edges()) {
    const Point2 a = zone.vertex(be.v[0]);
    const Point2 b = zone.vertex(be.v[1]);
    const bool floor = a.y == 0.0 && b.y == 0.0;
    if (floor) {
      CHECK(be.label == BoundaryLabel::ZoneGamma2);
      ++g2;
    } else {
      CHECK(be.label == BoundaryLabel::ZoneGamma1);
      ++g1;
    }
  }
  CHECK(g2 == 5);
  CHECK(g1 == 7);
}

TEST_CASE("mesh text round trip") {
  StenosisGeometry g = default_geometry();
  g.mesh_size = 0.25;
  const Mesh m = build_stenosed_artery(g);
  const auto path = (std::filesystem::temp_directory_path() / "hemofsi_roundtrip.mesh").string();
  write_mesh_text(m, path);
  const Mesh r = read_mesh_text(path);
  CHECK(r.vertices() == m.vertices());
  CHECK(r.triangles() == m.triangles());
  CHECK(r.subdomains() == m.subdomains());
  REQUIRE(r.boundary_edges().size() == m.boundary_edges().size());
  for (std::size_t k = 0; k < r.boundary_edges().size(); ++k) {
    CHECK(r.boundary_edges()[k].v == m.boundary_edges()[k].v);
    CHECK(r.boundary_edges()[k].label == m.boundary_edges()[k].label);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_mesh_text(path), IoError);
}

TEST_CASE("delaunay refinement of a square honours size and angle") {
  Pslg pslg;
  pslg.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  pslg.segments = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  pslg.segment_markers = {1, 1, 1, 1};
  const std::array<RegionSeed, 1> seeds{RegionSeed{{0.5, 0.5}, 0}};
  MeshingOptions opts;
  opts.size = [](const Point2&, int) { return 0.1; };
  const Triangulation tri = triangulate(pslg, seeds, opts);
  double area = 0.0;
  for (const auto& t : tri.triangles) {
    const double a = 0.5 * orient(tri.points[static_cast<std::size_t>(t[0])], tri.points[static_cast<std::size_t>(t[1])],
                                  tri.points[static_cast<std::size_t>(t[2])]);
    CHECK(a > 0.0);
    area += a;
    for (int i = 0; i < 3; ++i) {
      CHECK(distance(tri.points[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])],
                     tri.points[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 1) % 3)])]) <= 0.1 + 1e-12);
    }
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-13));

  opts.max_points = 10;
  CHECK_THROWS_WITH_AS(triangulate(pslg, seeds, opts), doctest::Contains("budget"), MeshError);
}
