//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <memory>
#include <vector>

#include "hemofsi/fe_space.hpp"
#include "hemofsi/materials.hpp"
#include "hemofsi/sparse.hpp"

namespace hemofsi {

/// Deformation phi (degree 2, vector), displacement xi = phi - X and
/// hydrostatic pressure p (degree 1, dyn/cm^2) on the reference wall mesh.
struct SolidState {
  std::shared_ptr<const Mesh> mesh;
  Field phi;
  Field xi;
  Field p;

  /// phi = identity, p = 0.
  static SolidState reference(std::shared_ptr<const Mesh> mesh);
  /// Rebuilds xi from phi.
  void sync_displacement();
  /// Vertex positions of the deformed mesh.
  std::vector<Point2> deformed_vertices() const;
};

/// tol is absolute on the Euclidean norm of the deformation update (cm).
/// epsilon is the pressure penalty in cm^2/N.
struct NewtonParams {
  double tol = 1e-8;
  int max_iterations = 20;
  double epsilon = 1e-6;
  int max_halvings = 8;

  void validate() const;
  /// Penalty in cm^2/dyn.
  double epsilon_cgs() const { return epsilon * 1e-5; }
};

/// Cauchy stress (dyn/cm^2) acting on the wall interface, one tensor per
/// degree-2 node of the wall mesh. Only nodes on Interface edges are read.
/// The Piola traction is sigma cof(F) n0 with n0 the outward reference
/// normal of the wall.
struct InterfaceLoad {
  std::vector<Mat2> stress;

  static InterfaceLoad none(const FeSpace& wall_space);
  static InterfaceLoad uniform(const FeSpace& wall_space, const Mat2& sigma);
};

struct NewtonResult {
  SolidState state;
  std::vector<double> update_norms;  // ||delta phi_k||_2 per iteration
  int iterations = 0;
  double residual_norm = 0.0;        // free-dof residual after the last update
};

/// Residual and tangent of the penalized mixed problem at a state, over the
/// unknown vector [phi dofs, p dofs]. Dirichlet rows are not eliminated.
struct SolidSystem {
  Eigen::VectorXd residual;
  SparseMatrix tangent;
};
SolidSystem assemble_solid_system(const SolidState& state, const InterfaceLoad& load,
                                  const HyperelasticParams& mat_cgs, double epsilon_cgs);

/// Packs and unpacks the unknown vector.
Eigen::VectorXd pack_solid(const SolidState& state);
SolidState unpack_solid(const SolidState& like, const Eigen::VectorXd& x);

/// Dofs of the deformation with xi = 0 (FixedWall nodes).
std::vector<char> solid_dirichlet_mask(const SolidState& state);

/// Damped Newton iteration from state0. mat is in N/cm^2. Throws SolverError
/// listing the update history when it does not converge.
NewtonResult newton_solve(const SolidState& state0, const InterfaceLoad& load, const HyperelasticParams& mat,
                          const NewtonParams& params);

/// L2 norm of det(grad phi) - 1 over the reference wall.
double incompressibility_residual(const SolidState& state);

/// Smallest det(grad phi) at the order-5 quadrature points.
double min_jacobian(const SolidState& state);

}  // namespace hemofsi
