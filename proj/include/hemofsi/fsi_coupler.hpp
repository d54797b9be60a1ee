//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <memory>
#include <vector>

#include "hemofsi/fluid_solver.hpp"
#include "hemofsi/materials.hpp"
#include "hemofsi/structure_solver.hpp"

namespace hemofsi {

enum class ViscosityModel { Newtonian, Carreau, ModifiedCarreau };

struct CouplingConfig {
  FluidParams fluid;
  ViscosityModel viscosity = ViscosityModel::ModifiedCarreau;
  CarreauParams carreau;
  double newtonian_mu = 0.00345;  // Pa*s
  HyperelasticParams wall;
  NewtonParams newton;

  void validate() const;
};

/// Matching degree-2 nodes on the fluid-wall interface.
struct InterfaceMap {
  std::vector<int> lumen_nodes;
  std::vector<int> wall_nodes;
};
/// Both meshes must be subdomain extractions of one parent mesh.
InterfaceMap build_interface_map(const Mesh& lumen, const Mesh& wall);

/// Componentwise discrete harmonic extension of the values that
/// `boundary_data` (degree-2 vector field) holds on boundary nodes. The
/// stiffness is assembled on the four linear sub-triangles of each element,
/// which keeps the discrete maximum principle of the linear scheme.
Field harmonic_extend(const Field& boundary_data);

/// Fluid stress and traction at interface nodes of the lumen mesh.
struct InterfaceTraction {
  std::vector<int> nodes;       // degree-2 lumen nodes on Interface
  std::vector<Mat2> stress;     // 2 mu D(v) - p Id, dyn/cm^2
  std::vector<Point2> normal;   // outward fluid normal
  std::vector<Point2> traction; // -stress * normal, force on the wall
};
/// Nodal stresses average the element stresses of the lumen triangles
/// around each node. mu in Pa*s.
InterfaceTraction interface_traction(const FluidState& fluid, const Field& mu);

/// Stress data on the wall space through the node map.
InterfaceLoad to_wall_load(const InterfaceTraction& tr, const InterfaceMap& map, const FeSpace& wall_space);

/// (xi_new - xi_old) / dt.
Field domain_velocity(const Field& xi_new, const Field& xi_old, double dt);

/// Viscosity field (degree 1, Pa*s) for a velocity field under a model.
/// ModifiedCarreau advances `history`; t must equal history.k() * dt.
Field viscosity_field(const Field& v, double t, const CouplingConfig& cfg, ViscosityHistory& history,
                      bool* clamped = nullptr);

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  int newton_iterations = 0;
  std::vector<double> newton_updates;
  double newton_residual = 0.0;
  double divergence = 0.0;
  double min_quality = 0.0;
  double min_jacobian = 0.0;
  double inlet_flux = 0.0;   // inward positive
  double outlet_flux = 0.0;  // outward positive
  double max_speed = 0.0;
  double max_wall_displacement = 0.0;
  double interface_mismatch = 0.0;
  bool viscosity_clamped = false;
};

struct CouplingState {
  int n = 0;
  double t = 0.0;
  std::shared_ptr<const Mesh> global_ref;
  std::shared_ptr<const Mesh> lumen_ref;
  std::shared_ptr<const Mesh> wall_ref;
  InterfaceMap map;
  FluidState fluid;   // on the current lumen mesh
  SolidState solid;   // on the reference wall mesh
  Field xi_f;         // ALE displacement on the reference lumen mesh
  Field mu;           // current viscosity, degree 1, Pa*s
  ViscosityHistory history;

  /// Fluid at rest, wall at its reference configuration, t = 0.
  static CouplingState initial(std::shared_ptr<const Mesh> global, const CouplingConfig& cfg);
};

/// One staggered step: fluid on the current mesh, traction transfer, wall
/// Newton solve, harmonic mesh motion, viscosity update. Sub-solver errors
/// are rethrown as SolverError prefixed with the step number.
StepDiagnostics coupling_step(CouplingState& state, const CouplingConfig& cfg);

/// Largest distance between matched interface vertices of the moved lumen
/// mesh and the deformed wall.
double interface_mismatch(const CouplingState& state);

}  // namespace hemofsi
