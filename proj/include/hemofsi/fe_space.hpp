//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <array>
#include <functional>
#include <memory>

#include <Eigen/Core>

#include "hemofsi/mesh.hpp"

namespace hemofsi {

/// Continuous Lagrange space of degree 1 or 2, scalar or 2-vector valued.
///
/// Nodes are the mesh vertices followed, for degree 2, by one node per
/// edge (node nv + e sits at the midpoint of edge e). Local node 3 + j of
/// a triangle is the midpoint of local edge j. Vector dofs interleave the
/// components: dof = arity * node + component.
class FeSpace {
 public:
  FeSpace() = default;
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int arity);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int arity() const { return arity_; }
  int nodes_per_element() const { return degree_ == 1 ? 3 : 6; }
  int num_nodes() const { return num_nodes_; }
  int num_dofs() const { return arity_ * num_nodes_; }
  int dof(int node, int component) const { return arity_ * node + component; }

  /// Global node of local node i of triangle t.
  int element_node(int t, int i) const;
  Point2 node_point(int node) const;
  /// Sorted nodes lying on edges with the given label (vertices and, for
  /// degree 2, edge midpoints).
  std::vector<int> labelled_nodes(BoundaryLabel label) const;

  /// Same mesh object, degree and arity.
  bool operator==(const FeSpace& o) const {
    return mesh_ == o.mesh_ && degree_ == o.degree_ && arity_ == o.arity_;
  }
  /// Same degree and arity on a mesh with the same topology.
  bool compatible(const FeSpace& o) const;
  FeSpace with_arity(int arity) const { return FeSpace(mesh_, degree_, arity); }
  FeSpace with_degree(int degree) const { return FeSpace(mesh_, degree, arity_); }
  FeSpace on_mesh(std::shared_ptr<const Mesh> mesh) const { return FeSpace(std::move(mesh), degree_, arity_); }

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_ = 1;
  int arity_ = 1;
  int num_nodes_ = 0;
};

/// Affine element data: area and gradients of the barycentric coordinates.
struct ElementGeometry {
  double area = 0.0;
  std::array<Point2, 3> vertices{};
  std::array<Point2, 3> grad_lambda{};

  Point2 point(const std::array<double, 3>& bary) const {
    return bary[0] * vertices[0] + bary[1] * vertices[1] + bary[2] * vertices[2];
  }
};
ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Basis values and physical gradients at one barycentric point.
struct ShapeEval {
  int count = 0;
  std::array<double, 6> phi{};
  std::array<Point2, 6> grad{};
};
ShapeEval eval_shapes(int degree, const ElementGeometry& geom, const std::array<double, 3>& bary);
/// Basis values only.
std::array<double, 6> shape_values(int degree, const std::array<double, 3>& bary);

/// Finite-element function: a space plus its dof values.
class Field {
 public:
  Field() = default;
  explicit Field(FeSpace space);
  Field(FeSpace space, Eigen::VectorXd values);

  const FeSpace& space() const { return space_; }
  const Mesh& mesh() const { return space_.mesh(); }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  double operator()(int node, int component = 0) const { return values_[space_.dof(node, component)]; }
  double& operator()(int node, int component = 0) { return values_[space_.dof(node, component)]; }
  Point2 vec(int node) const { return {values_[2 * node], values_[2 * node + 1]}; }

  bool is_finite() const { return values_.allFinite(); }
  /// Same values, viewed on another mesh of identical topology.
  Field rebased(std::shared_ptr<const Mesh> mesh) const;

  static Field from_function(const FeSpace& space, const std::function<double(const Point2&)>& f);
  static Field from_vector_function(const FeSpace& space,
                                    const std::function<Point2(const Point2&)>& f);
  static Field constant(const FeSpace& space, double value);

 private:
  FeSpace space_;
  Eigen::VectorXd values_;
};

}  // namespace hemofsi
