//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include <doctest.h>

#include <cmath>
#include <memory>

#include "hemofsi/error.hpp"
#include "hemofsi/fluid_solver.hpp"
#include "mms_oracle.hpp"

using namespace hemofsi;

namespace {

using oracle::MmsErrors;
using oracle::solve_mms;

std::shared_ptr<const Mesh> channel(int nx, int ny) {
  return std::make_shared<const Mesh>(make_rectangle_mesh(0, 4, 0, 1, nx, ny));
}

}  // namespace

TEST_CASE("inlet waveform") {
  CHECK(inlet_profile(0.25, 5.0) == 5.0);
  CHECK(inlet_profile(0.5, 5.0) == 0.0);
  CHECK(inlet_profile(2.0, 5.0) == 0.0);
  CHECK(inlet_profile(0.125, 5.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(inlet_profile(1.25, 5.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(inlet_profile(0.25, 5.0, InletWaveform::Gated) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(inlet_profile(5.25, 5.0, InletWaveform::Gated) == 0.0);
  CHECK(inlet_profile(10.25, 5.0, InletWaveform::Gated) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(inlet_profile(3.0, 2.0, InletWaveform::Constant) == 2.0);
}

TEST_CASE("characteristic foot") {
  const auto mesh = channel(8, 2);
  const FeSpace vs(mesh, 2, 2);
  const Field v = Field::constant(vs, 0.0);
  CHECK(characteristic_foot(v, {1.0, 0.5}, 0.1) == Point2{1.0, 0.5});
  const Field u = Field::from_vector_function(vs, [](const Point2&) { return Point2{1.0, 0.0}; });
  const Point2 inside = characteristic_foot(u, {2.0, 0.5}, 0.5);
  CHECK(inside.x == doctest::Approx(1.5));
  // A foot upstream of the inlet lands on the inlet plane.
  const Point2 clamped = characteristic_foot(u, {0.2, 0.5}, 1.0);
  CHECK(std::abs(clamped.x) <= 1e-14);
  CHECK(clamped.y == doctest::Approx(0.5));
}

TEST_CASE("zero data gives the zero solution") {
  const auto mesh = channel(8, 3);
  FluidParams params;
  params.inlet_amplitude = 0.0;
  const FluidState s = FluidState::at_rest(mesh);
  const FluidState next = fluid_step(s, Field::constant(FeSpace(mesh, 1, 1), 0.0035), params, 0.01);
  CHECK(next.v.values().cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(next.p.values().cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(fluid_step(s, Field::constant(FeSpace(mesh, 1, 1), 0.0), params, 0.01), SolverError);
}

TEST_CASE("manufactured solution converges") {
  const MmsErrors e8 = solve_mms(8);
  const MmsErrors e16 = solve_mms(16);
  const MmsErrors e32 = solve_mms(32);
  const double rv1 = std::log2(e8.velocity / e16.velocity);
  const double rv2 = std::log2(e16.velocity / e32.velocity);
  const double rp2 = std::log2(e16.pressure / e32.pressure);
  MESSAGE("velocity errors " << e8.velocity << " " << e16.velocity << " " << e32.velocity);
  MESSAGE("pressure errors " << e8.pressure << " " << e16.pressure << " " << e32.pressure);
  CHECK(rv1 >= 2.5);
  CHECK(rv2 >= 2.5);
  CHECK(rp2 >= 1.5);
}

TEST_CASE("Poiseuille channel") {
  const auto mesh = channel(24, 8);
  FluidParams params;
  params.dt = 10.0;
  params.inlet_amplitude = 1.0;
  params.waveform = InletWaveform::Constant;
  const Field mu = Field::constant(FeSpace(mesh, 1, 1), 0.0035);
  FluidState s = FluidState::at_rest(mesh);
  for (int k = 1; k <= 30; ++k) s = fluid_step(s, mu, params, k * params.dt);

  for (double y : {0.125, 0.25, 0.5, 0.8}) {
    const auto v = *interpolate(s.v, {2.0, y});
    const double exact = 4.0 * y * (1.0 - y);
    CHECK(std::abs(v[0] - exact) <= 0.02 * 1.0);
    CHECK(std::abs(v[1]) <= 0.02);
  }
  const double q_in = boundary_flux(s.v, BoundaryLabel::Inlet);
  const double q_out = boundary_flux(s.v, BoundaryLabel::Outlet);
  CHECK(q_in == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(q_in + q_out) <= 1e-3 * std::abs(q_in));
  // The penalty ties the projected divergence to the pressure.
  CHECK(divergence_residual(s) == doctest::Approx(params.epsilon * l2_norm(s.p)).epsilon(1e-6));
  // Pressure drop between x = 1 and x = 3 matches 8 mu U L / H^2 (mu in poise).
  const double dp = (*interpolate(s.p, {1.0, 0.5}))[0] - (*interpolate(s.p, {3.0, 0.5}))[0];
  CHECK(dp == doctest::Approx(8.0 * 0.035 * 2.0).epsilon(0.02));
}
