//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/fluid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "hemofsi/error.hpp"
#include "hemofsi/materials.hpp"
#include "hemofsi/quadrature.hpp"
#include "hemofsi/units.hpp"

namespace hemofsi {

namespace {

constexpr std::array<std::array<double, 3>, 6> kP2NodeBary{{
    {1.0, 0.0, 0.0},
    {0.0, 1.0, 0.0},
    {0.0, 0.0, 1.0},
    {0.5, 0.5, 0.0},
    {0.0, 0.5, 0.5},
    {0.5, 0.0, 0.5},
}};

bool is_wall_label(BoundaryLabel l) {
  return l == BoundaryLabel::Interface || l == BoundaryLabel::FixedWall || l == BoundaryLabel::OuterWall;
}

Point2 foot_from_velocity(const Mesh& mesh, const Point2& x, const Point2& vx, double dt, int* hint) {
  const Point2 foot = x - dt * vx;
  const int start = hint ? *hint : -1;
  if (auto loc = mesh.locate(foot, start)) {
    if (hint) *hint = loc->triangle;
    return foot;
  }
  return mesh.closest_boundary_point(foot);
}

}  // namespace

double inlet_profile(double t, double amplitude, InletWaveform waveform) {
  constexpr double period = 0.5;
  double phase = std::fmod(t, period) / period;
  if (phase < 0.0) phase += 1.0;
  const double s = std::sin(std::numbers::pi * phase);
  switch (waveform) {
    case InletWaveform::SineSquared:
      return amplitude * s * s;
    case InletWaveform::Gated: {
      const auto window = static_cast<long long>(std::floor(t / 5.0));
      return (window % 2 == 0) ? amplitude * s * s : 0.0;
    }
    case InletWaveform::Constant:
      return amplitude;
  }
  return 0.0;
}

void FluidParams::validate() const {
  if (!(rho > 0.0)) throw ConfigError("fluid.rho: must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("fluid.epsilon: must be positive");
  if (!(dt > 0.0)) throw ConfigError("time.dt: must be positive");
  if (!std::isfinite(inlet_amplitude) || inlet_amplitude < 0.0) {
    throw ConfigError("inlet.amplitude: must be finite and non-negative");
  }
}

FluidState FluidState::at_rest(std::shared_ptr<const Mesh> mesh) {
  FluidState s;
  s.mesh = mesh;
  s.v = Field(FeSpace(mesh, 2, 2));
  s.p = Field(FeSpace(mesh, 1, 1));
  s.w = Field(FeSpace(mesh, 2, 2));
  return s;
}

FluidState FluidState::rebased(std::shared_ptr<const Mesh> moved) const {
  FluidState s;
  s.mesh = moved;
  s.v = v.rebased(moved);
  s.p = p.rebased(moved);
  s.w = w.rebased(moved);
  return s;
}

Point2 characteristic_foot(const Field& v_n, const Point2& x, double dt, int* hint) {
  int local = hint ? *hint : -1;
  const auto vx = interpolate(v_n, x, &local);
  if (!vx) throw Error("characteristic foot requested outside the mesh");
  const Point2 foot = foot_from_velocity(v_n.mesh(), x, {(*vx)[0], (*vx)[1]}, dt, &local);
  if (hint) *hint = local;
  return foot;
}

std::vector<char> fluid_dirichlet_mask(const FeSpace& vs) {
  std::vector<char> mask(static_cast<std::size_t>(vs.num_dofs()), 0);
  for (int li = 0; li < kNumBoundaryLabels; ++li) {
    const auto label = static_cast<BoundaryLabel>(li);
    if (!is_wall_label(label) && label != BoundaryLabel::Inlet) continue;
    for (int n : vs.labelled_nodes(label)) {
      for (int c = 0; c < vs.arity(); ++c) mask[static_cast<std::size_t>(vs.dof(n, c))] = 1;
    }
  }
  return mask;
}

FluidState fluid_step(const FluidState& state, const Field& mu, const FluidParams& params, double t_next,
                      const Forcing& forcing) {
  params.validate();
  const Mesh& mesh = *state.mesh;
  const FeSpace& vs = state.v.space();
  const FeSpace& ps = state.p.space();
  if (vs.degree() != 2 || vs.arity() != 2 || ps.degree() != 1 || ps.arity() != 1) {
    throw Error("fluid state must hold a degree-2 velocity and a degree-1 pressure");
  }
  if (mu.space().arity() != 1 || static_cast<std::size_t>(mu.mesh().num_triangles()) != mesh.num_triangles()) {
    throw Error("viscosity field must be scalar on the fluid mesh");
  }
  if (!mu.is_finite() || !(mu.values().minCoeff() > 0.0)) {
    throw SolverError("viscosity field must be finite and positive");
  }
  if (!state.v.is_finite() || !state.w.is_finite()) throw SolverError("non-finite fluid state");

  const int nv = vs.num_dofs();
  const int np = ps.num_dofs();
  const int n = nv + np;
  const double rho = params.rho;
  const double dt = params.dt;
  const double eps = params.epsilon;
  const auto& rule = quadrature_rule(5);

  Triplets trip;
  trip.reserve(mesh.num_triangles() * 15 * 15);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    std::array<int, 15> dofs{};
    for (int i = 0; i < 6; ++i) {
      const int node = vs.element_node(t, i);
      dofs[static_cast<std::size_t>(2 * i)] = vs.dof(node, 0);
      dofs[static_cast<std::size_t>(2 * i + 1)] = vs.dof(node, 1);
    }
    for (int k = 0; k < 3; ++k) dofs[static_cast<std::size_t>(12 + k)] = nv + ps.element_node(t, k);

    Eigen::Matrix<double, 15, 15> ke = Eigen::Matrix<double, 15, 15>::Zero();
    Eigen::Matrix<double, 15, 1> fe = Eigen::Matrix<double, 15, 1>::Zero();
    int hint = t;
    for (const auto& qp : rule.points) {
      const double wq = qp.weight * 2.0 * geom.area;
      const ShapeEval s = eval_shapes(2, geom, qp.bary);
      const auto& psi = qp.bary;
      const Point2 x = geom.point(qp.bary);
      const double mu_q = units::from_pascal_seconds(evaluate(mu, t, qp.bary)[0]);
      const auto wv = evaluate(state.w, t, qp.bary);
      const auto vx = evaluate(state.v, t, qp.bary);
      const Point2 foot = foot_from_velocity(mesh, x, {vx[0], vx[1]}, dt, &hint);
      auto vstar = interpolate(state.v, foot, &hint);
      if (!vstar) {
        hint = t;
        vstar = vx;
      }
      const Point2 f = forcing ? forcing(x) : Point2{};

      for (int i = 0; i < 6; ++i) {
        const double phi_i = s.phi[static_cast<std::size_t>(i)];
        const Point2 gi = s.grad[static_cast<std::size_t>(i)];
        fe(2 * i) += wq * phi_i * (rho / dt * (*vstar)[0] + f.x);
        fe(2 * i + 1) += wq * phi_i * (rho / dt * (*vstar)[1] + f.y);
        for (int j = 0; j < 6; ++j) {
          const double phi_j = s.phi[static_cast<std::size_t>(j)];
          const Point2 gj = s.grad[static_cast<std::size_t>(j)];
          const double diag = wq * (rho / dt * phi_i * phi_j + mu_q * dot(gi, gj) -
                                    rho * phi_i * (wv[0] * gj.x + wv[1] * gj.y));
          const double gi_[2] = {gi.x, gi.y};
          const double gj_[2] = {gj.x, gj.y};
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              ke(2 * i + a, 2 * j + b) += wq * mu_q * gi_[b] * gj_[a] + (a == b ? diag : 0.0);
            }
          }
        }
        for (int k = 0; k < 3; ++k) {
          // -(p, div eta) in the momentum rows, (q, div v) in the continuity rows.
          const double bx = wq * psi[static_cast<std::size_t>(k)] * gi.x;
          const double by = wq * psi[static_cast<std::size_t>(k)] * gi.y;
          ke(2 * i, 12 + k) -= bx;
          ke(2 * i + 1, 12 + k) -= by;
          ke(12 + k, 2 * i) += bx;
          ke(12 + k, 2 * i + 1) += by;
        }
      }
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          ke(12 + k, 12 + l) += wq * eps * psi[static_cast<std::size_t>(k)] * psi[static_cast<std::size_t>(l)];
        }
      }
    }
    for (int r = 0; r < 15; ++r) {
      rhs[dofs[static_cast<std::size_t>(r)]] += fe(r);
      for (int c = 0; c < 15; ++c) {
        trip.emplace_back(dofs[static_cast<std::size_t>(r)], dofs[static_cast<std::size_t>(c)], ke(r, c));
      }
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());

  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  const std::vector<int> inlet_nodes = vs.labelled_nodes(BoundaryLabel::Inlet);
  if (!inlet_nodes.empty()) {
    double y0 = std::numeric_limits<double>::infinity();
    double y1 = -y0;
    for (int node : inlet_nodes) {
      y0 = std::min(y0, vs.node_point(node).y);
      y1 = std::max(y1, vs.node_point(node).y);
    }
    const double peak = inlet_profile(t_next, params.inlet_amplitude, params.waveform);
    const double height = y1 - y0;
    for (int node : inlet_nodes) {
      const double s = height > 0.0 ? (vs.node_point(node).y - y0) / height : 0.0;
      fixed[static_cast<std::size_t>(vs.dof(node, 0))] = 1;
      fixed[static_cast<std::size_t>(vs.dof(node, 1))] = 1;
      values[vs.dof(node, 0)] = 4.0 * peak * s * (1.0 - s);
      values[vs.dof(node, 1)] = 0.0;
    }
  }
  for (int li = 0; li < kNumBoundaryLabels; ++li) {
    const auto label = static_cast<BoundaryLabel>(li);
    if (!is_wall_label(label)) continue;
    for (int node : vs.labelled_nodes(label)) {
      for (int c = 0; c < 2; ++c) {
        fixed[static_cast<std::size_t>(vs.dof(node, c))] = 1;
        values[vs.dof(node, c)] = state.w(node, c);
      }
    }
  }

  const Eigen::VectorXd x = solve_with_dirichlet(a, rhs, fixed, values);
  if (!x.allFinite()) throw SolverError("fluid solve produced non-finite values");
  FluidState out = state;
  out.v.values() = x.head(nv);
  out.p.values() = x.tail(np);
  return out;
}

double divergence_residual(const FluidState& state) {
  const Mesh& mesh = *state.mesh;
  const FeSpace ps(state.mesh, 1, 1);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(ps.num_dofs());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    for (const auto& qp : quadrature_rule(5).points) {
      const Mat2 g = gradient(state.v, t, geom, qp.bary);
      const double w = qp.weight * 2.0 * geom.area * g.trace();
      for (int k = 0; k < 3; ++k) r[ps.element_node(t, k)] += w * qp.bary[static_cast<std::size_t>(k)];
    }
  }
  const Eigen::VectorXd proj = solve_sparse({assemble_mass(ps), r});
  return std::sqrt(std::max(0.0, proj.dot(r)));
}

Field shear_rate_field(const Field& v) {
  const FeSpace s(v.space().mesh_ptr(), 1, 1);
  Field out(s);
  const auto grads = recover_gradient(v);
  for (std::size_t i = 0; i < grads.size(); ++i) out.values()[static_cast<Eigen::Index>(i)] = shear_rate(grads[i]);
  return out;
}

Mat2 fluid_stress(const Field& v, const Field& p, const Field& mu, int t, int local_node) {
  const auto& bary = kP2NodeBary.at(static_cast<std::size_t>(local_node));
  const Mat2 g = gradient(v, t, bary);
  const double mu_q = units::from_pascal_seconds(evaluate(mu, t, bary)[0]);
  const double p_q = evaluate(p, t, bary)[0];
  return mu_q * (g + g.transpose()) - p_q * Mat2::Identity();
}

std::vector<Mat2> nodal_fluid_stress(const Field& v, const Field& p, const Field& mu) {
  const FeSpace& vs = v.space();
  std::vector<Mat2> out(static_cast<std::size_t>(vs.num_nodes()), Mat2::Zero());
  std::vector<int> count(out.size(), 0);
  for (int t = 0; t < static_cast<int>(v.mesh().num_triangles()); ++t) {
    for (int i = 0; i < 6; ++i) {
      const auto node = static_cast<std::size_t>(vs.element_node(t, i));
      out[node] += fluid_stress(v, p, mu, t, i);
      ++count[node];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (count[i] > 0) out[i] /= count[i];
  }
  return out;
}

}  // namespace hemofsi
