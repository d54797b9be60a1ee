//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "hemofsi/error.hpp"

namespace hemofsi {

namespace {

constexpr std::array<std::string_view, kNumBoundaryLabels> kLabelNames = {
    "Inlet", "Outlet", "Interface", "FixedWall", "OuterWall", "ZoneGamma1", "ZoneGamma2"};

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

Point2 closest_on_segment(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + s * ab;
}

}  // namespace

std::string_view to_string(BoundaryLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<BoundaryLabel> parse_boundary_label(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<BoundaryLabel>(i);
  }
  return std::nullopt;
}

Mesh::Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
           std::vector<Subdomain> subdomains, std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      subdomains_(std::move(subdomains)),
      boundary_edges_(std::move(boundary_edges)) {
  if (subdomains_.empty()) subdomains_.assign(triangles_.size(), Subdomain::Lumen);
  if (subdomains_.size() != triangles_.size()) {
    throw MeshError("subdomain tag count does not match triangle count");
  }
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!is_finite(vertices_[i])) {
      throw MeshError("vertex " + std::to_string(i) + " has non-finite coordinates");
    }
  }
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t]) {
      if (v < 0 || v >= nv) {
        throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(v) + " out of range");
      }
    }
  }
  for (std::size_t k = 0; k < boundary_edges_.size(); ++k) {
    for (int v : boundary_edges_[k].v) {
      if (v < 0 || v >= nv) {
        throw MeshError("boundary edge " + std::to_string(k) + " references vertex " +
                        std::to_string(v) + " out of range");
      }
    }
  }
  build_topology();
  validate();
}

void Mesh::build_topology() {
  auto& index = edge_index_;
  index.clear();
  index.reserve(triangles_.size() * 2);
  edges_.clear();
  edge_tris_.clear();
  tri_edges_.assign(triangles_.size(), {-1, -1, -1});
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int j = 0; j < 3; ++j) {
      const int a = tri[static_cast<std::size_t>(j)];
      const int b = tri[static_cast<std::size_t>((j + 1) % 3)];
      const auto key = edge_key(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        const int e = static_cast<int>(edges_.size());
        index.emplace(key, e);
        edges_.push_back({std::min(a, b), std::max(a, b)});
        edge_tris_.push_back({static_cast<int>(t), -1});
        tri_edges_[t][static_cast<std::size_t>(j)] = e;
      } else {
        auto& owners = edge_tris_[static_cast<std::size_t>(it->second)];
        if (owners[1] != -1) {
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") is shared by more than two triangles");
        }
        owners[1] = static_cast<int>(t);
        tri_edges_[t][static_cast<std::size_t>(j)] = it->second;
      }
    }
  }
  edge_label_.assign(edges_.size(), -1);
  for (std::size_t k = 0; k < boundary_edges_.size(); ++k) {
    const auto& be = boundary_edges_[k];
    auto it = index.find(edge_key(be.v[0], be.v[1]));
    if (it == index.end()) {
      throw MeshError("boundary edge " + std::to_string(k) + " is not an edge of the mesh");
    }
    auto& slot = edge_label_[static_cast<std::size_t>(it->second)];
    if (slot != -1) {
      throw MeshError("edge (" + std::to_string(be.v[0]) + "," + std::to_string(be.v[1]) +
                      ") carries more than one label");
    }
    slot = static_cast<int>(k);
  }
}

void Mesh::validate() const {
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    if (!(orient(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) > 0.0)) {
      throw MeshError("triangle " + std::to_string(t) + " has non-positive area");
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& owners = edge_tris_[e];
    const bool on_boundary = owners[1] == -1;
    const int label = edge_label_[e];
    if (on_boundary && label == -1) {
      throw MeshError("boundary edge (" + std::to_string(edges_[e][0]) + "," +
                      std::to_string(edges_[e][1]) + ") has no label");
    }
    if (!on_boundary && label != -1) {
      const auto l = boundary_edges_[static_cast<std::size_t>(label)].label;
      if (l != BoundaryLabel::Interface ||
          subdomains_[static_cast<std::size_t>(owners[0])] ==
              subdomains_[static_cast<std::size_t>(owners[1])]) {
        throw MeshError("interior edge (" + std::to_string(edges_[e][0]) + "," +
                        std::to_string(edges_[e][1]) + ") labelled " +
                        std::string(to_string(l)));
      }
    }
    if (!on_boundary && label == -1 &&
        subdomains_[static_cast<std::size_t>(owners[0])] !=
            subdomains_[static_cast<std::size_t>(owners[1])]) {
      throw MeshError("subdomain interface edge (" + std::to_string(edges_[e][0]) + "," +
                      std::to_string(edges_[e][1]) + ") is not labelled Interface");
    }
  }
}

int Mesh::neighbor(int t, int j) const {
  const auto& owners = edge_tris_[static_cast<std::size_t>(triangle_edge(t, j))];
  return owners[0] == t ? owners[1] : owners[0];
}

std::optional<int> Mesh::find_edge(int a, int b) const {
  auto it = edge_index_.find(edge_key(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<BoundaryLabel> Mesh::edge_label(int e) const {
  const int k = edge_label_[static_cast<std::size_t>(e)];
  if (k < 0) return std::nullopt;
  return boundary_edges_[static_cast<std::size_t>(k)].label;
}

std::vector<int> Mesh::labelled_edges(BoundaryLabel label) const {
  std::vector<int> out;
  const auto by_boundary = labelled_order();
  for (std::size_t k = 0; k < boundary_edges_.size(); ++k) {
    if (boundary_edges_[k].label == label) out.push_back(by_boundary[k]);
  }
  return out;
}

std::vector<int> Mesh::labelled_vertices(BoundaryLabel label) const {
  std::vector<int> out;
  for (const auto& be : boundary_edges_) {
    if (be.label == label) {
      out.push_back(be.v[0]);
      out.push_back(be.v[1]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Mesh::area(int t) const {
  const auto& tri = triangle(t);
  return 0.5 * orient(vertex(tri[0]), vertex(tri[1]), vertex(tri[2]));
}

Point2 Mesh::centroid(int t) const {
  const auto& tri = triangle(t);
  return (vertex(tri[0]) + vertex(tri[1]) + vertex(tri[2])) * (1.0 / 3.0);
}

double Mesh::total_area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) a += area(static_cast<int>(t));
  return a;
}

double Mesh::subdomain_area(Subdomain s) const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (subdomains_[t] == s) a += area(static_cast<int>(t));
  }
  return a;
}

double Mesh::quality(int t) const {
  const auto& tri = triangle(t);
  const Point2& a = vertex(tri[0]);
  const Point2& b = vertex(tri[1]);
  const Point2& c = vertex(tri[2]);
  const double s = dot(b - a, b - a) + dot(c - b, c - b) + dot(a - c, a - c);
  return 4.0 * std::sqrt(3.0) * area(t) / s;
}

double Mesh::min_quality() const {
  double q = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triangles_.size(); ++t) q = std::min(q, quality(static_cast<int>(t)));
  return q;
}

double Mesh::min_area() const {
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triangles_.size(); ++t) a = std::min(a, area(static_cast<int>(t)));
  return a;
}

std::optional<PointLocation> Mesh::locate(const Point2& p, int hint) const {
  if (triangles_.empty()) return std::nullopt;
  const auto bary_of = [&](int t) {
    const auto& tri = triangle(t);
    const Point2& a = vertex(tri[0]);
    const Point2& b = vertex(tri[1]);
    const Point2& c = vertex(tri[2]);
    const double det = orient(a, b, c);
    return std::array<double, 3>{orient(p, b, c) / det, orient(a, p, c) / det,
                                 orient(a, b, p) / det};
  };
  constexpr double kTol = 1e-12;
  int t = (hint >= 0 && hint < static_cast<int>(triangles_.size())) ? hint : 0;
  const int max_steps = static_cast<int>(triangles_.size()) + 8;
  for (int step = 0; step < max_steps; ++step) {
    const auto bc = bary_of(t);
    // Barycentric i < 0 means p lies beyond the edge opposite vertex i,
    // which is local edge (i + 1) % 3.
    int worst = -1;
    double worst_val = -kTol;
    for (int i = 0; i < 3; ++i) {
      if (bc[static_cast<std::size_t>(i)] < worst_val) {
        worst_val = bc[static_cast<std::size_t>(i)];
        worst = i;
      }
    }
    if (worst < 0) return PointLocation{t, bc};
    const int next = neighbor(t, (worst + 1) % 3);
    if (next < 0) break;
    t = next;
  }
  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    const auto bc = bary_of(static_cast<int>(k));
    if (bc[0] >= -kTol && bc[1] >= -kTol && bc[2] >= -kTol) {
      return PointLocation{static_cast<int>(k), bc};
    }
  }
  return std::nullopt;
}

Point2 Mesh::closest_boundary_point(const Point2& p) const {
  Point2 best = p;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_tris_[e][1] != -1) continue;
    const Point2 q = closest_on_segment(p, vertices_[edges_[e][0]], vertices_[edges_[e][1]]);
    const double d = distance(p, q);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

Mesh Mesh::moved(std::span<const Point2> displacement) const {
  if (displacement.size() != vertices_.size()) {
    throw MeshError("displacement size does not match vertex count");
  }
  Mesh out = *this;
  for (std::size_t i = 0; i < vertices_.size(); ++i) out.vertices_[i] += displacement[i];
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (!(out.area(static_cast<int>(t)) > 0.0)) {
      throw MeshError("mesh motion inverts triangle " + std::to_string(t));
    }
  }
  return out;
}

Mesh Mesh::transformed(const std::function<Point2(const Point2&)>& f) const {
  Mesh out = *this;
  for (auto& v : out.vertices_) v = f(v);
  out.validate();
  return out;
}

bool Mesh::is_connected(std::span<const int> tris) const {
  if (tris.empty()) return false;
  std::vector<char> in(triangles_.size(), 0);
  for (int t : tris) in[static_cast<std::size_t>(t)] = 1;
  std::vector<char> seen(triangles_.size(), 0);
  std::vector<int> stack{tris.front()};
  seen[static_cast<std::size_t>(tris.front())] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    ++count;
    for (int j = 0; j < 3; ++j) {
      const int n = neighbor(t, j);
      if (n >= 0 && in[static_cast<std::size_t>(n)] && !seen[static_cast<std::size_t>(n)]) {
        seen[static_cast<std::size_t>(n)] = 1;
        stack.push_back(n);
      }
    }
  }
  std::size_t unique = 0;
  for (char c : in) unique += static_cast<std::size_t>(c);
  return count == unique;
}

Mesh Mesh::submesh(std::span<const int> tris,
                   const std::function<std::optional<BoundaryLabel>(std::optional<BoundaryLabel>)>&
                       relabel) const {
  if (tris.empty()) throw MeshError("submesh triangle set is empty");
  std::vector<int> sorted(tris.begin(), tris.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int t : sorted) {
    if (t < 0 || t >= static_cast<int>(triangles_.size())) {
      throw MeshError("submesh triangle index " + std::to_string(t) + " out of range");
    }
  }
  std::vector<char> in(triangles_.size(), 0);
  for (int t : sorted) in[static_cast<std::size_t>(t)] = 1;

  std::vector<int> new_index(vertices_.size(), -1);
  for (int t : sorted) {
    for (int v : triangle(t)) new_index[static_cast<std::size_t>(v)] = 0;
  }
  std::vector<Point2> verts;
  std::vector<int> parent_v;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (new_index[v] == 0) {
      new_index[v] = static_cast<int>(verts.size());
      verts.push_back(vertices_[v]);
      parent_v.push_back(static_cast<int>(v));
    }
  }
  std::vector<Triangle> out_tris;
  std::vector<Subdomain> out_sub;
  for (int t : sorted) {
    const auto& tri = triangle(t);
    out_tris.push_back({new_index[static_cast<std::size_t>(tri[0])],
                        new_index[static_cast<std::size_t>(tri[1])],
                        new_index[static_cast<std::size_t>(tri[2])]});
    out_sub.push_back(subdomain(t));
  }
  // Boundary edges of the selection, in parent boundary order first, then
  // the cut edges in edge order.
  std::vector<BoundaryEdge> out_edges;
  std::vector<char> done(edges_.size(), 0);
  const auto selection_boundary = [&](int e) {
    const auto& owners = edge_tris_[static_cast<std::size_t>(e)];
    const bool a = owners[0] >= 0 && in[static_cast<std::size_t>(owners[0])];
    const bool b = owners[1] >= 0 && in[static_cast<std::size_t>(owners[1])];
    return a != b;
  };
  const auto add = [&](int e) {
    done[static_cast<std::size_t>(e)] = 1;
    auto label = relabel(edge_label(e));
    if (!label) {
      throw MeshError("submesh boundary edge (" + std::to_string(edges_[static_cast<std::size_t>(e)][0]) +
                      "," + std::to_string(edges_[static_cast<std::size_t>(e)][1]) + ") has no label");
    }
    // Orient along the owning triangle so boundary edges run counter-clockwise.
    const auto& owners = edge_tris_[static_cast<std::size_t>(e)];
    const int t = (owners[0] >= 0 && in[static_cast<std::size_t>(owners[0])]) ? owners[0] : owners[1];
    int a = edges_[static_cast<std::size_t>(e)][0];
    int b = edges_[static_cast<std::size_t>(e)][1];
    for (int j = 0; j < 3; ++j) {
      if (triangle_edge(t, j) == e) {
        a = triangle(t)[static_cast<std::size_t>(j)];
        b = triangle(t)[static_cast<std::size_t>((j + 1) % 3)];
      }
    }
    out_edges.push_back({{new_index[static_cast<std::size_t>(a)], new_index[static_cast<std::size_t>(b)]}, *label});
  };
  for (const int e : labelled_order()) {
    if (selection_boundary(e)) add(e);
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!done[e] && selection_boundary(static_cast<int>(e))) add(static_cast<int>(e));
  }
  Mesh out(std::move(verts), std::move(out_tris), std::move(out_sub), std::move(out_edges));
  out.parent_vertices_ = std::move(parent_v);
  out.parent_triangles_ = std::move(sorted);
  return out;
}

std::vector<int> Mesh::labelled_order() const {
  std::vector<int> by_boundary(boundary_edges_.size(), -1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_label_[e] >= 0) by_boundary[static_cast<std::size_t>(edge_label_[e])] = static_cast<int>(e);
  }
  return by_boundary;
}

Mesh Mesh::extract_subdomain(Subdomain s) const {
  std::vector<int> tris;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (subdomains_[t] == s) tris.push_back(static_cast<int>(t));
  }
  if (tris.empty()) throw MeshError("subdomain has no triangles");
  return submesh(tris, [](std::optional<BoundaryLabel> l) { return l; });
}

Mesh Mesh::extract_submesh(std::span<const int> tris) const {
  if (tris.empty()) throw MeshError("submesh triangle set is empty");
  if (!is_connected(tris)) throw MeshError("submesh triangle set is disconnected");
  return submesh(tris, [](std::optional<BoundaryLabel> l) -> std::optional<BoundaryLabel> {
    if (l && *l == BoundaryLabel::Interface) return BoundaryLabel::ZoneGamma2;
    return BoundaryLabel::ZoneGamma1;
  });
}

void write_mesh_text(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.precision(17);
  out << "hemofsi-mesh 1\n";
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices()) out << v.x << ' ' << v.y << '\n';
  out << "triangles " << mesh.num_triangles() << '\n';
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' '
        << static_cast<int>(mesh.subdomains()[t]) << '\n';
  }
  out << "boundary_edges " << mesh.boundary_edges().size() << '\n';
  for (const auto& be : mesh.boundary_edges()) {
    out << be.v[0] << ' ' << be.v[1] << ' ' << to_string(be.label) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

Mesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const auto fail = [&](const std::string& what) {
    return IoError(path + ": " + what);
  };
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "hemofsi-mesh" || version != 1) {
    throw fail("not a hemofsi-mesh version 1 file");
  }
  std::size_t n = 0;
  if (!(in >> word >> n) || word != "vertices") throw fail("expected 'vertices'");
  std::vector<Point2> verts(n);
  for (auto& v : verts) {
    if (!(in >> v.x >> v.y)) throw fail("truncated vertex list");
  }
  if (!(in >> word >> n) || word != "triangles") throw fail("expected 'triangles'");
  std::vector<Triangle> tris(n);
  std::vector<Subdomain> subs(n);
  for (std::size_t t = 0; t < n; ++t) {
    int s = 0;
    if (!(in >> tris[t][0] >> tris[t][1] >> tris[t][2] >> s)) throw fail("truncated triangle list");
    if (s != 0 && s != 1) throw fail("bad subdomain tag " + std::to_string(s));
    subs[t] = static_cast<Subdomain>(s);
  }
  if (!(in >> word >> n) || word != "boundary_edges") throw fail("expected 'boundary_edges'");
  std::vector<BoundaryEdge> edges(n);
  for (auto& be : edges) {
    if (!(in >> be.v[0] >> be.v[1] >> word)) throw fail("truncated boundary edge list");
    auto label = parse_boundary_label(word);
    if (!label) throw fail("unknown boundary label '" + word + "'");
    be.label = *label;
  }
  try {
    return Mesh(std::move(verts), std::move(tris), std::move(subs), std::move(edges));
  } catch (const MeshError& e) {
    throw fail(e.what());
  }
}

Mesh make_rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny,
                         const RectangleLabels& labels, Subdomain subdomain,
                         const std::function<bool(int, int)>& diagonal) {
  if (nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0)) {
    throw MeshError("invalid rectangle mesh parameters");
  }
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Point2> verts;
  verts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      verts.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});
    }
  }
  std::vector<Triangle> tris;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (!diagonal || diagonal(i, j)) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
      }
    }
  }
  std::vector<BoundaryEdge> edges;
  for (int i = 0; i < nx; ++i) edges.push_back({{id(i, 0), id(i + 1, 0)}, labels.bottom});
  for (int j = 0; j < ny; ++j) edges.push_back({{id(nx, j), id(nx, j + 1)}, labels.right});
  for (int i = nx; i > 0; --i) edges.push_back({{id(i, ny), id(i - 1, ny)}, labels.top});
  for (int j = ny; j > 0; --j) edges.push_back({{id(0, j), id(0, j - 1)}, labels.left});
  std::vector<Subdomain> subs(tris.size(), subdomain);
  return Mesh(std::move(verts), std::move(tris), std::move(subs), std::move(edges));
}

}  // namespace hemofsi
