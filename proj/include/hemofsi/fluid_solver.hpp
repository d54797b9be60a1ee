//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <functional>
#include <memory>

#include "hemofsi/fe_space.hpp"
#include "hemofsi/fe_tools.hpp"

namespace hemofsi {

enum class InletWaveform {
  SineSquared,  // A sin^2(pi t / 0.5)
  Gated,        // sin^2 on [10i, 10i + 5], zero on [10i + 5, 10i + 10]
  Constant,     // A
};

/// Peak inlet speed (cm/s) at time t.
double inlet_profile(double t, double amplitude, InletWaveform waveform = InletWaveform::SineSquared);

/// Fluid parameters in CGS. epsilon is the pressure penalty.
struct FluidParams {
  double rho = 1.056;
  double epsilon = 1e-6;
  double dt = 0.01;
  double inlet_amplitude = 5.0;
  InletWaveform waveform = InletWaveform::SineSquared;

  void validate() const;
};

/// Velocity (degree 2), pressure (degree 1) and domain velocity (degree 2)
/// on one lumen mesh.
struct FluidState {
  std::shared_ptr<const Mesh> mesh;
  Field v;
  Field p;
  Field w;

  /// Zero fields on `mesh`.
  static FluidState at_rest(std::shared_ptr<const Mesh> mesh);
  /// Same dof values viewed on a moved mesh of identical topology.
  FluidState rebased(std::shared_ptr<const Mesh> moved) const;
};

/// Body force per unit volume (dyn/cm^3) at a point; test hook.
using Forcing = std::function<Point2(const Point2&)>;

/// x - v_n(x) dt, projected onto the boundary when it leaves the mesh.
/// `hint` seeds point location.
Point2 characteristic_foot(const Field& v_n, const Point2& x, double dt, int* hint = nullptr);

/// One step of the penalized Navier-Stokes system on the current mesh.
///
/// mu is a scalar viscosity field in Pa*s on the same mesh. Boundary data:
/// parabolic inlet with peak inlet_profile(t_next), v = w on wall-type
/// labels (Interface takes precedence over Inlet at shared nodes), natural
/// outlet. Throws SolverError on a singular system or an invalid viscosity.
FluidState fluid_step(const FluidState& state, const Field& mu, const FluidParams& params, double t_next,
                      const Forcing& forcing = {});

/// L2 norm of the degree-1 L2 projection of div v. With the penalty this
/// equals epsilon * ||p|| for a fluid_step solution.
double divergence_residual(const FluidState& state);

/// Dofs that carry Dirichlet data in fluid_step (velocity block only).
std::vector<char> fluid_dirichlet_mask(const FeSpace& velocity_space);

/// Scalar shear-rate field on the degree-1 nodes, from recovered gradients.
Field shear_rate_field(const Field& v);

/// Fluid Cauchy stress 2 mu D(v) - p Id at degree-2 node `node` in triangle
/// t (mu in Pa*s, stress in dyn/cm^2).
Mat2 fluid_stress(const Field& v, const Field& p, const Field& mu, int t, int local_node);

/// fluid_stress at every degree-2 node, averaged over the triangles that
/// share the node.
std::vector<Mat2> nodal_fluid_stress(const Field& v, const Field& p, const Field& mu);

}  // namespace hemofsi
