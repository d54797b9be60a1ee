//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/rupture_solver.hpp"

#include <cmath>

#include "hemofsi/error.hpp"
#include "hemofsi/quadrature.hpp"
#include "hemofsi/units.hpp"

namespace hemofsi {

namespace {

LameParams to_cgs(const LameParams& lame) { return {units::from_megapascal(lame.young), lame.poisson}; }

int local_edge(const Mesh& mesh, int t, int e) {
  for (int j = 0; j < 3; ++j) {
    if (mesh.triangle_edge(t, j) == e) return j;
  }
  throw MeshError("edge is not a side of its triangle");
}

std::array<double, 3> edge_bary(int jl, double s) {
  std::array<double, 3> b{};
  b[static_cast<std::size_t>(jl)] = 1.0 - s;
  b[static_cast<std::size_t>((jl + 1) % 3)] = s;
  return b;
}

double edge_length(const Mesh& mesh, int e) { return distance(mesh.vertex(mesh.edge(e)[0]), mesh.vertex(mesh.edge(e)[1])); }

Mat2 interpolate_stress(const FeSpace& vs, const std::vector<Mat2>& stress, int t, const std::array<double, 3>& bary) {
  const auto phi = shape_values(2, bary);
  Mat2 s = Mat2::Zero();
  for (int a = 0; a < 6; ++a) s += phi[static_cast<std::size_t>(a)] * stress[static_cast<std::size_t>(vs.element_node(t, a))];
  return s;
}

std::vector<char> gamma2_node_mask(const FeSpace& space) {
  std::vector<char> mask(static_cast<std::size_t>(space.num_nodes()), 0);
  for (int n : space.labelled_nodes(BoundaryLabel::ZoneGamma2)) mask[static_cast<std::size_t>(n)] = 1;
  return mask;
}

void check_zone_field(const Field& f) {
  if (f.space().degree() != 2 || f.space().arity() != 2) throw Error("zone fields must be degree-2 vector fields");
  if (f.mesh().labelled_edges(BoundaryLabel::ZoneGamma2).empty()) {
    throw MeshError("zone has no ZoneGamma2 edge; the pure traction problem is not supported");
  }
}

}  // namespace

void ClotProblem::validate() const {
  if (!zone) throw Error("clot problem without a zone mesh");
  lame.validate();
  const FeSpace& vs = wall_displacement.space();
  if (&vs.mesh() != zone.get()) throw Error("wall displacement is not defined on the zone mesh");
  check_zone_field(wall_displacement);
  if (fluid_stress.size() != static_cast<std::size_t>(vs.num_nodes())) {
    throw Error("fluid stress must hold one tensor per zone node");
  }
  if (!wall_displacement.is_finite()) throw SolverError("non-finite wall displacement");
  for (const Mat2& s : fluid_stress) {
    if (!s.allFinite()) throw SolverError("non-finite fluid stress");
  }
}

ClotProblem ClotProblem::unloaded(std::shared_ptr<const Mesh> zone, const LameParams& lame) {
  ClotProblem p;
  p.zone = zone;
  p.lame = lame;
  p.wall_displacement = Field(FeSpace(zone, 2, 2));
  p.fluid_stress.assign(static_cast<std::size_t>(p.wall_displacement.space().num_nodes()), Mat2::Zero());
  return p;
}

Field build_lifting(const Field& data, LiftingKind kind) {
  check_zone_field(data);
  const FeSpace& vs = data.space();
  const std::vector<char> fixed = gamma2_node_mask(vs);
  Field out(vs);
  if (kind == LiftingKind::Local) {
    for (int n = 0; n < vs.num_nodes(); ++n) {
      if (!fixed[static_cast<std::size_t>(n)]) continue;
      out(n, 0) = data(n, 0);
      out(n, 1) = data(n, 1);
    }
    return out;
  }
  const FeSpace scalar = vs.with_arity(1);
  const SparseMatrix k = assemble_p1_iso_p2_stiffness(scalar);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(scalar.num_dofs());
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(scalar.num_dofs());
    for (int n = 0; n < scalar.num_nodes(); ++n) {
      if (fixed[static_cast<std::size_t>(n)]) g[n] = data(n, c);
    }
    const Eigen::VectorXd x = solve_with_dirichlet(k, zero, fixed, g);
    for (int n = 0; n < scalar.num_nodes(); ++n) out(n, c) = x[n];
  }
  return out;
}

SparseMatrix assemble_elasticity(const FeSpace& vs, double mu, double lambda) {
  if (vs.degree() != 2 || vs.arity() != 2) throw Error("elasticity needs a degree-2 vector space");
  const Mesh& mesh = vs.mesh();
  const auto& rule = quadrature_rule(2);
  Triplets trip;
  trip.reserve(mesh.num_triangles() * 144);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    Eigen::Matrix<double, 12, 12> ke = Eigen::Matrix<double, 12, 12>::Zero();
    for (const auto& qp : rule.points) {
      const double wq = qp.weight * 2.0 * geom.area;
      const ShapeEval s = eval_shapes(2, geom, qp.bary);
      // Strain-displacement rows: eps_xx, eps_yy, 2 eps_xy.
      Eigen::Matrix<double, 3, 12> b = Eigen::Matrix<double, 3, 12>::Zero();
      for (int a = 0; a < 6; ++a) {
        const Point2 g = s.grad[static_cast<std::size_t>(a)];
        b(0, 2 * a) = g.x;
        b(1, 2 * a + 1) = g.y;
        b(2, 2 * a) = g.y;
        b(2, 2 * a + 1) = g.x;
      }
      Eigen::Matrix3d d;
      d << 2.0 * mu + lambda, lambda, 0.0, lambda, 2.0 * mu + lambda, 0.0, 0.0, 0.0, mu;
      ke += wq * b.transpose() * d * b;
    }
    for (int a = 0; a < 6; ++a) {
      for (int i = 0; i < 2; ++i) {
        const int r = vs.dof(vs.element_node(t, a), i);
        for (int bn = 0; bn < 6; ++bn) {
          for (int j = 0; j < 2; ++j) {
            trip.emplace_back(r, vs.dof(vs.element_node(t, bn), j), ke(2 * a + i, 2 * bn + j));
          }
        }
      }
    }
  }
  SparseMatrix k(vs.num_dofs(), vs.num_dofs());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

Eigen::VectorXd assemble_zone_load(const FeSpace& vs, const std::vector<Mat2>& fluid_stress) {
  const Mesh& mesh = vs.mesh();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(vs.num_dofs());
  for (int e : mesh.labelled_edges(BoundaryLabel::ZoneGamma1)) {
    const int t = mesh.edge_triangles(e)[0];
    const int jl = local_edge(mesh, t, e);
    const Point2 n = outward_normal(mesh, e, t);
    const double len = edge_length(mesh, e);
    for (const auto& qp : edge_quadrature()) {
      const auto bary = edge_bary(jl, qp.s);
      const Eigen::Vector2d tr = interpolate_stress(vs, fluid_stress, t, bary) * Eigen::Vector2d(n.x, n.y);
      const auto phi = shape_values(2, bary);
      for (int a = 0; a < 6; ++a) {
        const int node = vs.element_node(t, a);
        const double w = qp.weight * len * phi[static_cast<std::size_t>(a)];
        f[vs.dof(node, 0)] += w * tr(0);
        f[vs.dof(node, 1)] += w * tr(1);
      }
    }
  }
  return f;
}

ClotSolution clot_solve(const ClotProblem& prob) {
  prob.validate();
  const FeSpace& vs = prob.wall_displacement.space();
  const LameParams cgs = to_cgs(prob.lame);
  const SparseMatrix k = assemble_elasticity(vs, cgs.mu(), cgs.lambda());
  const Eigen::VectorXd f = assemble_zone_load(vs, prob.fluid_stress);

  ClotSolution sol;
  sol.lifting = build_lifting(prob.wall_displacement, prob.lifting);
  std::vector<char> fixed(static_cast<std::size_t>(vs.num_dofs()), 0);
  for (int n : vs.labelled_nodes(BoundaryLabel::ZoneGamma2)) {
    fixed[static_cast<std::size_t>(vs.dof(n, 0))] = 1;
    fixed[static_cast<std::size_t>(vs.dof(n, 1))] = 1;
  }
  const Eigen::VectorXd rhs = f - k * sol.lifting.values();
  const Eigen::VectorXd zeta = solve_with_dirichlet(k, rhs, fixed, Eigen::VectorXd::Zero(vs.num_dofs()));
  sol.zeta = Field(vs, zeta);
  sol.u = Field(vs, zeta + sol.lifting.values());
  sol.reaction = k * sol.u.values() - f;
  return sol;
}

ZoneDiagnostics zone_diagnostics(const ClotSolution& sol, const LameParams& lame,
                                 const std::vector<Mat2>& fluid_stress) {
  const FeSpace& vs = sol.u.space();
  const Mesh& mesh = vs.mesh();
  if (fluid_stress.size() != static_cast<std::size_t>(vs.num_nodes())) {
    throw Error("fluid stress must hold one tensor per zone node");
  }
  const LameParams cgs = to_cgs(lame);
  ZoneDiagnostics d;

  double disp = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const double area = mesh.area(t);
    d.area += area;
    for (const auto& qp : quadrature_rule(5).points) {
      const auto u = evaluate(sol.u, t, qp.bary);
      disp += 2.0 * area * qp.weight * std::hypot(u[0], u[1]);
    }
  }
  if (!(d.area > 0.0)) throw Error("zone has zero area");
  d.displacement_zone = disp / d.area;

  const auto boundary_mean = [&](BoundaryLabel label, double& length, const auto& integrand) {
    double sum = 0.0;
    length = 0.0;
    for (int e : mesh.labelled_edges(label)) {
      const int t = mesh.edge_triangles(e)[0];
      const int jl = local_edge(mesh, t, e);
      const double len = edge_length(mesh, e);
      length += len;
      for (const auto& qp : edge_quadrature()) sum += qp.weight * len * integrand(t, e, edge_bary(jl, qp.s));
    }
    return sum;
  };
  const auto speed = [&](int t, int, const std::array<double, 3>& b) {
    const auto u = evaluate(sol.u, t, b);
    return std::hypot(u[0], u[1]);
  };
  const double u1 = boundary_mean(BoundaryLabel::ZoneGamma1, d.gamma1_length, speed);
  if (!(d.gamma1_length > 0.0)) throw Error("zone has no blood-facing boundary");
  const double u2 = boundary_mean(BoundaryLabel::ZoneGamma2, d.gamma2_length, speed);
  d.displacement_gamma1 = u1 / d.gamma1_length;
  d.displacement_gamma2 = d.gamma2_length > 0.0 ? u2 / d.gamma2_length : 0.0;

  Eigen::Vector2d traction = Eigen::Vector2d::Zero();
  double shear = 0.0;
  for (int e : mesh.labelled_edges(BoundaryLabel::ZoneGamma1)) {
    const int t = mesh.edge_triangles(e)[0];
    const int jl = local_edge(mesh, t, e);
    const double len = edge_length(mesh, e);
    const Point2 n = outward_normal(mesh, e, t);
    const ElementGeometry geom = element_geometry(mesh, t);
    for (const auto& qp : edge_quadrature()) {
      const auto b = edge_bary(jl, qp.s);
      traction += qp.weight * len * interpolate_stress(vs, fluid_stress, t, b) * Eigen::Vector2d(n.x, n.y);
      const Mat2 g = gradient(sol.u, t, geom, b);
      shear += qp.weight * len * max_shear(hooke_stress(SymTensor2::from(g), cgs));
    }
  }
  d.traction_gamma1 = traction.norm() / d.gamma1_length;
  d.max_shear_gamma1 = shear / d.gamma1_length;

  const FeSpace s1(vs.mesh_ptr(), 1, 1);
  const auto grads = recover_gradient(sol.u);
  d.max_shear = Field(s1);
  for (int i = 0; i < s1.num_nodes(); ++i) {
    d.max_shear(i) = max_shear(hooke_stress(SymTensor2::from(grads[static_cast<std::size_t>(i)]), cgs));
  }
  return d;
}

std::vector<int> zone_parent_nodes(const Mesh& zone, const Mesh& parent) {
  const auto& pv = zone.parent_vertices();
  if (pv.size() != zone.num_vertices()) throw Error("mesh is not a submesh");
  const int nv_parent = static_cast<int>(parent.num_vertices());
  std::vector<int> out(pv.begin(), pv.end());
  out.reserve(zone.num_vertices() + zone.num_edges());
  for (int e = 0; e < static_cast<int>(zone.num_edges()); ++e) {
    const auto& ed = zone.edge(e);
    const auto pe = parent.find_edge(pv[static_cast<std::size_t>(ed[0])], pv[static_cast<std::size_t>(ed[1])]);
    if (!pe) throw MeshError("submesh edge missing from the parent mesh");
    out.push_back(nv_parent + *pe);
  }
  return out;
}

}  // namespace hemofsi
