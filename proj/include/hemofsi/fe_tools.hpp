//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hemofsi/fe_space.hpp"
#include "hemofsi/sparse.hpp"

namespace hemofsi {

using Mat2 = Eigen::Matrix2d;

/// Field value (one or two components) inside triangle t.
std::array<double, 2> evaluate(const Field& f, int t, const std::array<double, 3>& bary);
/// Gradient inside triangle t: row c holds the gradient of component c.
Mat2 gradient(const Field& f, int t, const std::array<double, 3>& bary);
Mat2 gradient(const Field& f, int t, const ElementGeometry& geom, const std::array<double, 3>& bary);

/// Value of f at p, or nullopt when p is outside f's mesh. `hint` seeds the
/// point-location walk and receives the containing triangle.
std::optional<std::array<double, 2>> interpolate(const Field& f, const Point2& p, int* hint = nullptr);

/// L2 norm over the mesh with the order-5 rule (all components).
double l2_norm(const Field& f);
/// L2 norm of div f for a vector field.
double l2_norm_of_divergence(const Field& f);
/// L2 norm of f - exact (vector or scalar; scalar uses .x).
double l2_error(const Field& f, const std::function<Point2(const Point2&)>& exact);

/// Lumped L2 projection of the element gradients of f onto the degree-1
/// nodes (area-weighted average of the element gradients at each vertex
/// with P1 weights). One 2x2 tensor per vertex.
std::vector<Mat2> recover_gradient(const Field& f);

/// Degree-2 field restricted to its vertex values.
Field to_degree1(const Field& f);
/// Degree-1 field lifted to degree 2 (edge nodes take the edge average).
Field to_degree2(const Field& f);

/// Lumped (row-sum) P1 mass per vertex.
Eigen::VectorXd lumped_mass(const Mesh& mesh);

/// Integral of a scalar or each component of a vector field.
std::array<double, 2> integrate(const Field& f);

/// Outward unit normal of boundary edge e (requires e on the topological
/// boundary of the mesh, or supply the owning triangle explicitly).
Point2 outward_normal(const Mesh& mesh, int e, int owner = -1);

/// Scalar stiffness matrix (grad u, grad v) of a scalar space.
SparseMatrix assemble_stiffness(const FeSpace& scalar_space);
/// Linear stiffness on the four sub-triangles of each element of a scalar
/// degree-2 space (nodes as vertices of the refined mesh).
SparseMatrix assemble_p1_iso_p2_stiffness(const FeSpace& scalar_space);
/// Scalar mass matrix (u, v) of a scalar space.
SparseMatrix assemble_mass(const FeSpace& scalar_space);

/// Flux of a vector field through all edges with a given label, using the
/// outward normal.
double boundary_flux(const Field& v, BoundaryLabel label);

}  // namespace hemofsi
