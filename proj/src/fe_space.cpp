//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/fe_space.hpp"

#include <algorithm>

#include "hemofsi/error.hpp"

namespace hemofsi {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int arity)
    : mesh_(std::move(mesh)), degree_(degree), arity_(arity) {
  if (!mesh_) throw Error("finite-element space needs a mesh");
  if (degree_ != 1 && degree_ != 2) throw Error("unsupported element degree " + std::to_string(degree_));
  if (arity_ != 1 && arity_ != 2) throw Error("unsupported field arity " + std::to_string(arity_));
  num_nodes_ = static_cast<int>(mesh_->num_vertices());
  if (degree_ == 2) num_nodes_ += static_cast<int>(mesh_->num_edges());
}

int FeSpace::element_node(int t, int i) const {
  if (i < 3) return mesh_->triangle(t)[static_cast<std::size_t>(i)];
  return static_cast<int>(mesh_->num_vertices()) + mesh_->triangle_edge(t, i - 3);
}

Point2 FeSpace::node_point(int node) const {
  const int nv = static_cast<int>(mesh_->num_vertices());
  if (node < nv) return mesh_->vertex(node);
  const auto& e = mesh_->edge(node - nv);
  return midpoint(mesh_->vertex(e[0]), mesh_->vertex(e[1]));
}

std::vector<int> FeSpace::labelled_nodes(BoundaryLabel label) const {
  std::vector<int> out;
  const int nv = static_cast<int>(mesh_->num_vertices());
  for (int e : mesh_->labelled_edges(label)) {
    out.push_back(mesh_->edge(e)[0]);
    out.push_back(mesh_->edge(e)[1]);
    if (degree_ == 2) out.push_back(nv + e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool FeSpace::compatible(const FeSpace& o) const {
  return degree_ == o.degree_ && arity_ == o.arity_ && num_nodes_ == o.num_nodes_ &&
         mesh_->num_triangles() == o.mesh_->num_triangles();
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  ElementGeometry g;
  const auto& tri = mesh.triangle(t);
  for (int i = 0; i < 3; ++i) g.vertices[static_cast<std::size_t>(i)] = mesh.vertex(tri[static_cast<std::size_t>(i)]);
  const double twice = orient(g.vertices[0], g.vertices[1], g.vertices[2]);
  g.area = 0.5 * twice;
  for (int i = 0; i < 3; ++i) {
    const Point2& b = g.vertices[static_cast<std::size_t>((i + 1) % 3)];
    const Point2& c = g.vertices[static_cast<std::size_t>((i + 2) % 3)];
    g.grad_lambda[static_cast<std::size_t>(i)] = {(b.y - c.y) / twice, (c.x - b.x) / twice};
  }
  return g;
}

std::array<double, 6> shape_values(int degree, const std::array<double, 3>& l) {
  std::array<double, 6> phi{};
  if (degree == 1) {
    phi[0] = l[0];
    phi[1] = l[1];
    phi[2] = l[2];
    return phi;
  }
  for (std::size_t i = 0; i < 3; ++i) phi[i] = l[i] * (2.0 * l[i] - 1.0);
  for (std::size_t j = 0; j < 3; ++j) phi[3 + j] = 4.0 * l[j] * l[(j + 1) % 3];
  return phi;
}

ShapeEval eval_shapes(int degree, const ElementGeometry& g, const std::array<double, 3>& l) {
  ShapeEval s;
  s.phi = shape_values(degree, l);
  const auto& gl = g.grad_lambda;
  if (degree == 1) {
    s.count = 3;
    for (std::size_t i = 0; i < 3; ++i) s.grad[i] = gl[i];
    return s;
  }
  s.count = 6;
  for (std::size_t i = 0; i < 3; ++i) s.grad[i] = (4.0 * l[i] - 1.0) * gl[i];
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t k = (j + 1) % 3;
    s.grad[3 + j] = 4.0 * (l[k] * gl[j] + l[j] * gl[k]);
  }
  return s;
}

Field::Field(FeSpace space) : space_(std::move(space)), values_(Eigen::VectorXd::Zero(space_.num_dofs())) {}

Field::Field(FeSpace space, Eigen::VectorXd values) : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.num_dofs()) {
    throw Error("field has " + std::to_string(values_.size()) + " values for " +
                std::to_string(space_.num_dofs()) + " dofs");
  }
}

Field Field::rebased(std::shared_ptr<const Mesh> mesh) const {
  FeSpace s = space_.on_mesh(std::move(mesh));
  if (!s.compatible(space_)) throw Error("cannot rebase field onto a mesh of different topology");
  return Field(std::move(s), values_);
}

Field Field::from_function(const FeSpace& space, const std::function<double(const Point2&)>& f) {
  if (space.arity() != 1) throw Error("scalar function on a vector space");
  Field out(space);
  for (int n = 0; n < space.num_nodes(); ++n) out.values_[n] = f(space.node_point(n));
  return out;
}

Field Field::from_vector_function(const FeSpace& space, const std::function<Point2(const Point2&)>& f) {
  if (space.arity() != 2) throw Error("vector function on a scalar space");
  Field out(space);
  for (int n = 0; n < space.num_nodes(); ++n) {
    const Point2 v = f(space.node_point(n));
    out.values_[2 * n] = v.x;
    out.values_[2 * n + 1] = v.y;
  }
  return out;
}

Field Field::constant(const FeSpace& space, double value) {
  return Field(space, Eigen::VectorXd::Constant(space.num_dofs(), value));
}

}  // namespace hemofsi
