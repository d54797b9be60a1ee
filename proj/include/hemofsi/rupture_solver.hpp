//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <memory>
#include <vector>

#include "hemofsi/fe_tools.hpp"
#include "hemofsi/materials.hpp"

namespace hemofsi {

enum class LiftingKind {
  Harmonic,  // discrete harmonic, Dirichlet on ZoneGamma2, natural elsewhere
  Local,     // data on ZoneGamma2 nodes, zero at every other node
};

/// Linear elastic problem on a solidification zone.
///
/// The zone is a submesh whose ZoneGamma2 edges touch the vessel wall and
/// whose ZoneGamma1 edges face the blood. `fluid_stress` holds the fluid
/// Cauchy stress (dyn/cm^2) at every degree-2 node of the zone; only the
/// values on ZoneGamma1 enter the load. `wall_displacement` is a degree-2
/// vector field on the zone; only its ZoneGamma2 node values are used.
struct ClotProblem {
  std::shared_ptr<const Mesh> zone;
  LameParams lame;  // E in MPa
  std::vector<Mat2> fluid_stress;
  Field wall_displacement;
  LiftingKind lifting = LiftingKind::Harmonic;

  void validate() const;
  /// Zero stress and zero wall displacement on the given zone.
  static ClotProblem unloaded(std::shared_ptr<const Mesh> zone, const LameParams& lame);
};

struct ClotSolution {
  Field u;     // displacement (cm)
  Field zeta;  // u - lifting, zero on ZoneGamma2
  Field lifting;
  /// K u - f: the ZoneGamma2 reaction, zero at free dofs up to rounding.
  Eigen::VectorXd reaction;
};

/// Lifting of the ZoneGamma2 values of `data` into the zone. Throws
/// MeshError when the zone has no ZoneGamma2 edge.
Field build_lifting(const Field& data, LiftingKind kind = LiftingKind::Harmonic);

/// Plane-strain stiffness 2 mu (eps(u), eps(v)) + lambda (div u, div v) on a
/// degree-2 vector space, Lame constants in dyn/cm^2.
SparseMatrix assemble_elasticity(const FeSpace& vs, double mu, double lambda);

/// Load vector of the ZoneGamma1 traction sigma_f n_c, with n_c the outward
/// normal of the zone.
Eigen::VectorXd assemble_zone_load(const FeSpace& vs, const std::vector<Mat2>& fluid_stress);

/// Solves for zeta = u - h with zeta = 0 on ZoneGamma2. Throws MeshError
/// when ZoneGamma2 is empty.
ClotSolution clot_solve(const ClotProblem& prob);

struct ZoneDiagnostics {
  double area = 0.0;
  double gamma1_length = 0.0;
  double gamma2_length = 0.0;
  double displacement_zone = 0.0;    // mean |u| over the zone (cm)
  double displacement_gamma1 = 0.0;  // mean |u| over ZoneGamma1
  double displacement_gamma2 = 0.0;  // mean |u| over ZoneGamma2
  double traction_gamma1 = 0.0;      // |mean of sigma_f n_c| on ZoneGamma1 (dyn/cm^2)
  double max_shear_gamma1 = 0.0;     // mean clot max shear on ZoneGamma1 (dyn/cm^2)
  Field max_shear;                   // clot max shear at the zone vertices
};

/// Averages over the zone and its two boundary parts. Throws Error when the
/// zone or ZoneGamma1 has zero measure.
ZoneDiagnostics zone_diagnostics(const ClotSolution& sol, const LameParams& lame,
                                 const std::vector<Mat2>& fluid_stress);

/// Degree-2 node of `parent` for each degree-2 node of a submesh.
std::vector<int> zone_parent_nodes(const Mesh& zone, const Mesh& parent);

}  // namespace hemofsi
