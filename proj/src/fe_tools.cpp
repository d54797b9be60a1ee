//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/fe_tools.hpp"

#include <cmath>

#include "hemofsi/error.hpp"
#include "hemofsi/quadrature.hpp"

namespace hemofsi {

std::array<double, 2> evaluate(const Field& f, int t, const std::array<double, 3>& bary) {
  const FeSpace& s = f.space();
  const auto phi = shape_values(s.degree(), bary);
  std::array<double, 2> out{};
  for (int i = 0; i < s.nodes_per_element(); ++i) {
    const int n = s.element_node(t, i);
    for (int c = 0; c < s.arity(); ++c) out[static_cast<std::size_t>(c)] += phi[static_cast<std::size_t>(i)] * f(n, c);
  }
  return out;
}

Mat2 gradient(const Field& f, int t, const ElementGeometry& geom, const std::array<double, 3>& bary) {
  const FeSpace& s = f.space();
  const ShapeEval se = eval_shapes(s.degree(), geom, bary);
  Mat2 g = Mat2::Zero();
  for (int i = 0; i < se.count; ++i) {
    const int n = s.element_node(t, i);
    const Point2& d = se.grad[static_cast<std::size_t>(i)];
    for (int c = 0; c < s.arity(); ++c) {
      const double v = f(n, c);
      g(c, 0) += v * d.x;
      g(c, 1) += v * d.y;
    }
  }
  return g;
}

Mat2 gradient(const Field& f, int t, const std::array<double, 3>& bary) {
  return gradient(f, t, element_geometry(f.mesh(), t), bary);
}

std::optional<std::array<double, 2>> interpolate(const Field& f, const Point2& p, int* hint) {
  const auto loc = f.mesh().locate(p, hint ? *hint : -1);
  if (!loc) return std::nullopt;
  if (hint) *hint = loc->triangle;
  return evaluate(f, loc->triangle, loc->bary);
}

double l2_norm(const Field& f) {
  const Mesh& m = f.mesh();
  const auto& q = quadrature_rule(5);
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const double scale = 2.0 * m.area(t);
    for (const auto& qp : q.points) {
      const auto v = evaluate(f, t, qp.bary);
      sum += qp.weight * scale * (v[0] * v[0] + v[1] * v[1]);
    }
  }
  return std::sqrt(sum);
}

double l2_norm_of_divergence(const Field& f) {
  if (f.space().arity() != 2) throw Error("divergence of a scalar field");
  const Mesh& m = f.mesh();
  const auto& q = quadrature_rule(5);
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const ElementGeometry g = element_geometry(m, t);
    for (const auto& qp : q.points) {
      const double d = gradient(f, t, g, qp.bary).trace();
      sum += qp.weight * 2.0 * g.area * d * d;
    }
  }
  return std::sqrt(sum);
}

double l2_error(const Field& f, const std::function<Point2(const Point2&)>& exact) {
  const Mesh& m = f.mesh();
  const auto& q = quadrature_rule(5);
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const ElementGeometry g = element_geometry(m, t);
    for (const auto& qp : q.points) {
      const auto v = evaluate(f, t, qp.bary);
      const Point2 e = exact(g.point(qp.bary));
      const double dx = v[0] - e.x;
      const double dy = f.space().arity() == 2 ? v[1] - e.y : 0.0;
      sum += qp.weight * 2.0 * g.area * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(sum);
}

std::vector<Mat2> recover_gradient(const Field& f) {
  const Mesh& m = f.mesh();
  std::vector<Mat2> out(m.num_vertices(), Mat2::Zero());
  std::vector<double> weight(m.num_vertices(), 0.0);
  const auto& q = quadrature_rule(f.space().degree() == 1 ? 2 : 5);
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const ElementGeometry g = element_geometry(m, t);
    const auto& tri = m.triangle(t);
    for (const auto& qp : q.points) {
      const Mat2 grad = gradient(f, t, g, qp.bary);
      const double w = qp.weight * 2.0 * g.area;
      for (std::size_t i = 0; i < 3; ++i) {
        const auto v = static_cast<std::size_t>(tri[i]);
        out[v] += (w * qp.bary[i]) * grad;
        weight[v] += w * qp.bary[i];
      }
    }
  }
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (weight[v] > 0.0) out[v] /= weight[v];
  }
  return out;
}

Field to_degree1(const Field& f) {
  if (f.space().degree() == 1) return f;
  const FeSpace s1 = f.space().with_degree(1);
  Field out(s1);
  out.values() = f.values().head(s1.num_dofs());
  return out;
}

Field to_degree2(const Field& f) {
  if (f.space().degree() == 2) return f;
  const FeSpace s2 = f.space().with_degree(2);
  Field out(s2);
  const Mesh& m = f.mesh();
  const int nv = static_cast<int>(m.num_vertices());
  const int a = f.space().arity();
  out.values().head(f.values().size()) = f.values();
  for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
    for (int c = 0; c < a; ++c) out(nv + e, c) = 0.5 * (f(m.edge(e)[0], c) + f(m.edge(e)[1], c));
  }
  return out;
}

Eigen::VectorXd lumped_mass(const Mesh& mesh) {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const double a = mesh.area(t) / 3.0;
    for (int v : mesh.triangle(t)) mass[v] += a;
  }
  return mass;
}

std::array<double, 2> integrate(const Field& f) {
  const Mesh& m = f.mesh();
  const auto& q = quadrature_rule(5);
  std::array<double, 2> sum{};
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const double scale = 2.0 * m.area(t);
    for (const auto& qp : q.points) {
      const auto v = evaluate(f, t, qp.bary);
      sum[0] += qp.weight * scale * v[0];
      sum[1] += qp.weight * scale * v[1];
    }
  }
  return sum;
}

namespace {

SparseMatrix assemble_scalar(const FeSpace& s, bool stiffness) {
  if (s.arity() != 1) throw Error("scalar matrix requested on a vector space");
  const Mesh& m = s.mesh();
  const auto& q = quadrature_rule(stiffness || s.degree() == 1 ? 2 : 5);
  const int k = s.nodes_per_element();
  Triplets trip;
  trip.reserve(m.num_triangles() * static_cast<std::size_t>(k * k));
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const ElementGeometry g = element_geometry(m, t);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (const auto& qp : q.points) {
      const ShapeEval se = eval_shapes(s.degree(), g, qp.bary);
      const double w = qp.weight * 2.0 * g.area;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          const auto ui = static_cast<std::size_t>(i);
          const auto uj = static_cast<std::size_t>(j);
          local(i, j) += w * (stiffness ? dot(se.grad[ui], se.grad[uj]) : se.phi[ui] * se.phi[uj]);
        }
      }
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) trip.emplace_back(s.element_node(t, i), s.element_node(t, j), local(i, j));
    }
  }
  SparseMatrix a(s.num_dofs(), s.num_dofs());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

SparseMatrix assemble_stiffness(const FeSpace& s) { return assemble_scalar(s, true); }
SparseMatrix assemble_mass(const FeSpace& s) { return assemble_scalar(s, false); }

Point2 outward_normal(const Mesh& mesh, int e, int owner) {
  const int t = owner >= 0 ? owner : mesh.edge_triangles(e)[0];
  const auto& tri = mesh.triangle(t);
  for (int j = 0; j < 3; ++j) {
    if (mesh.triangle_edge(t, j) != e) continue;
    const Point2 a = mesh.vertex(tri[static_cast<std::size_t>(j)]);
    const Point2 b = mesh.vertex(tri[static_cast<std::size_t>((j + 1) % 3)]);
    const Point2 d = b - a;
    const double len = norm(d);
    // Counter-clockwise triangle: the interior lies to the left of a->b.
    return {d.y / len, -d.x / len};
  }
  throw Error("edge does not belong to the given triangle");
}

double boundary_flux(const Field& v, BoundaryLabel label) {
  if (v.space().arity() != 2) throw Error("flux of a scalar field");
  const Mesh& m = v.mesh();
  double flux = 0.0;
  for (int e : m.labelled_edges(label)) {
    const int t = m.edge_triangles(e)[0];
    const Point2 n = outward_normal(m, e, t);
    int j = 0;
    while (m.triangle_edge(t, j) != e) ++j;
    const double len = distance(m.vertex(m.edge(e)[0]), m.vertex(m.edge(e)[1]));
    for (const auto& qp : edge_quadrature()) {
      std::array<double, 3> bary{};
      bary[static_cast<std::size_t>(j)] = 1.0 - qp.s;
      bary[static_cast<std::size_t>((j + 1) % 3)] = qp.s;
      const auto val = evaluate(v, t, bary);
      flux += qp.weight * len * (val[0] * n.x + val[1] * n.y);
    }
  }
  return flux;
}

namespace {

constexpr std::array<std::array<int, 3>, 4> kSubTriangles{{{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}}};

}  // namespace

SparseMatrix assemble_p1_iso_p2_stiffness(const FeSpace& scalar) {
  if (scalar.degree() != 2 || scalar.arity() != 1) throw Error("sub-triangle stiffness needs a scalar degree-2 space");
  Triplets trip;
  const Mesh& mesh = scalar.mesh();
  trip.reserve(mesh.num_triangles() * 36);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    for (const auto& sub : kSubTriangles) {
      std::array<int, 3> nodes{};
      std::array<Point2, 3> p{};
      for (int i = 0; i < 3; ++i) {
        nodes[static_cast<std::size_t>(i)] = scalar.element_node(t, sub[static_cast<std::size_t>(i)]);
        p[static_cast<std::size_t>(i)] = scalar.node_point(nodes[static_cast<std::size_t>(i)]);
      }
      const double twice_area = orient(p[0], p[1], p[2]);
      // grad lambda_i = rot90(p_{i+2} - p_{i+1}) / (2 |T|).
      std::array<Point2, 3> g{};
      for (int i = 0; i < 3; ++i) {
        const Point2 d = p[static_cast<std::size_t>((i + 2) % 3)] - p[static_cast<std::size_t>((i + 1) % 3)];
        g[static_cast<std::size_t>(i)] = Point2{-d.y, d.x} * (1.0 / twice_area);
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          trip.emplace_back(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)],
                            0.5 * twice_area * dot(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]));
        }
      }
    }
  }
  SparseMatrix k(scalar.num_dofs(), scalar.num_dofs());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

}  // namespace hemofsi
