//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/fsi_coupler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hemofsi/error.hpp"
#include "hemofsi/fe_tools.hpp"

namespace hemofsi {

namespace {

std::vector<char> boundary_node_mask(const FeSpace& scalar) {
  const Mesh& mesh = scalar.mesh();
  const int nv = static_cast<int>(mesh.num_vertices());
  std::vector<char> mask(static_cast<std::size_t>(scalar.num_nodes()), 0);
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    if (mesh.edge_triangles(e)[1] >= 0) continue;
    mask[static_cast<std::size_t>(mesh.edge(e)[0])] = 1;
    mask[static_cast<std::size_t>(mesh.edge(e)[1])] = 1;
    if (scalar.degree() == 2) mask[static_cast<std::size_t>(nv + e)] = 1;
  }
  return mask;
}

std::vector<int> vertex_lookup(const Mesh& sub, std::size_t parent_size) {
  std::vector<int> out(parent_size, -1);
  const auto& pv = sub.parent_vertices();
  for (std::size_t i = 0; i < pv.size(); ++i) out[static_cast<std::size_t>(pv[i])] = static_cast<int>(i);
  return out;
}

}  // namespace

void CouplingConfig::validate() const {
  fluid.validate();
  carreau.validate();
  wall.validate();
  newton.validate();
  if (!(newtonian_mu > 0.0)) throw ConfigError("fluid.newtonian_mu: must be positive");
}

InterfaceMap build_interface_map(const Mesh& lumen, const Mesh& wall) {
  const auto& lp = lumen.parent_vertices();
  const auto& wp = wall.parent_vertices();
  if (lp.empty() || wp.empty()) throw MeshError("interface map needs submeshes of one parent mesh");
  std::size_t parent_size = 0;
  for (int v : lp) parent_size = std::max(parent_size, static_cast<std::size_t>(v) + 1);
  for (int v : wp) parent_size = std::max(parent_size, static_cast<std::size_t>(v) + 1);
  const std::vector<int> to_wall = vertex_lookup(wall, parent_size);

  InterfaceMap map;
  for (int v : lumen.labelled_vertices(BoundaryLabel::Interface)) {
    const int w = to_wall[static_cast<std::size_t>(lp[static_cast<std::size_t>(v)])];
    if (w < 0) throw MeshError("interface vertex " + std::to_string(v) + " has no wall partner");
    map.lumen_nodes.push_back(v);
    map.wall_nodes.push_back(w);
  }
  const int lnv = static_cast<int>(lumen.num_vertices());
  const int wnv = static_cast<int>(wall.num_vertices());
  for (int e : lumen.labelled_edges(BoundaryLabel::Interface)) {
    const auto& ed = lumen.edge(e);
    const int a = to_wall[static_cast<std::size_t>(lp[static_cast<std::size_t>(ed[0])])];
    const int b = to_wall[static_cast<std::size_t>(lp[static_cast<std::size_t>(ed[1])])];
    const auto we = (a >= 0 && b >= 0) ? wall.find_edge(a, b) : std::nullopt;
    if (!we) throw MeshError("interface edge " + std::to_string(e) + " has no wall partner");
    map.lumen_nodes.push_back(lnv + e);
    map.wall_nodes.push_back(wnv + *we);
  }
  return map;
}

Field harmonic_extend(const Field& data) {
  const FeSpace& vs = data.space();
  if (vs.arity() != 2) throw Error("harmonic extension expects a vector field");
  const FeSpace scalar = vs.with_arity(1);
  const SparseMatrix k = vs.degree() == 2 ? assemble_p1_iso_p2_stiffness(scalar) : assemble_stiffness(scalar);
  const std::vector<char> fixed = boundary_node_mask(scalar);
  Field out(vs);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(scalar.num_dofs());
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd g(scalar.num_dofs());
    for (int n = 0; n < scalar.num_nodes(); ++n) g[n] = data(n, c);
    const Eigen::VectorXd x = solve_with_dirichlet(k, zero, fixed, g);
    for (int n = 0; n < scalar.num_nodes(); ++n) out(n, c) = x[n];
  }
  return out;
}

InterfaceTraction interface_traction(const FluidState& fluid, const Field& mu) {
  const Mesh& mesh = *fluid.mesh;
  const FeSpace& vs = fluid.v.space();
  InterfaceTraction tr;
  tr.nodes = vs.labelled_nodes(BoundaryLabel::Interface);
  std::vector<int> slot(static_cast<std::size_t>(vs.num_nodes()), -1);
  for (std::size_t i = 0; i < tr.nodes.size(); ++i) slot[static_cast<std::size_t>(tr.nodes[i])] = static_cast<int>(i);
  const std::vector<Mat2> all = nodal_fluid_stress(fluid.v, fluid.p, mu);
  for (int node : tr.nodes) tr.stress.push_back(all[static_cast<std::size_t>(node)]);
  tr.normal.assign(tr.nodes.size(), Point2{});
  tr.traction.assign(tr.nodes.size(), Point2{});

  const int nv = static_cast<int>(mesh.num_vertices());
  for (int e : mesh.labelled_edges(BoundaryLabel::Interface)) {
    const Point2 n = outward_normal(mesh, e, mesh.edge_triangles(e)[0]);
    for (int node : {mesh.edge(e)[0], mesh.edge(e)[1], nv + e}) {
      tr.normal[static_cast<std::size_t>(slot[static_cast<std::size_t>(node)])] += n;
    }
  }
  for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
    const double len = norm(tr.normal[i]);
    if (len > 0.0) tr.normal[i] *= 1.0 / len;
    const Eigen::Vector2d t = -tr.stress[i] * Eigen::Vector2d(tr.normal[i].x, tr.normal[i].y);
    tr.traction[i] = {t(0), t(1)};
  }
  return tr;
}

InterfaceLoad to_wall_load(const InterfaceTraction& tr, const InterfaceMap& map, const FeSpace& wall_space) {
  std::unordered_map<int, std::size_t> slot;
  for (std::size_t i = 0; i < tr.nodes.size(); ++i) slot.emplace(tr.nodes[i], i);
  InterfaceLoad load = InterfaceLoad::none(wall_space);
  for (std::size_t k = 0; k < map.lumen_nodes.size(); ++k) {
    const auto it = slot.find(map.lumen_nodes[k]);
    if (it == slot.end()) throw Error("interface traction misses a mapped node");
    load.stress[static_cast<std::size_t>(map.wall_nodes[k])] = tr.stress[it->second];
  }
  return load;
}

Field domain_velocity(const Field& xi_new, const Field& xi_old, double dt) {
  if (!xi_new.space().compatible(xi_old.space())) throw Error("domain velocity from incompatible fields");
  if (!(dt > 0.0)) throw Error("domain velocity needs a positive time step");
  return Field(xi_new.space(), (xi_new.values() - xi_old.values()) / dt);
}

Field viscosity_field(const Field& v, double t, const CouplingConfig& cfg, ViscosityHistory& history,
                      bool* clamped) {
  if (clamped) *clamped = false;
  const Field rate = shear_rate_field(v);
  switch (cfg.viscosity) {
    case ViscosityModel::Newtonian:
      return Field::constant(rate.space(), cfg.newtonian_mu);
    case ViscosityModel::Carreau: {
      Field mu(rate.space());
      for (Eigen::Index i = 0; i < mu.values().size(); ++i) {
        mu.values()[i] = carreau_viscosity(rate.values()[i], cfg.carreau);
      }
      return mu;
    }
    case ViscosityModel::ModifiedCarreau: {
      auto r = modified_carreau_step(history, rate, t, cfg.carreau);
      if (clamped) *clamped = r.clamped;
      return std::move(r.mu);
    }
  }
  throw Error("unknown viscosity model");
}

CouplingState CouplingState::initial(std::shared_ptr<const Mesh> global, const CouplingConfig& cfg) {
  cfg.validate();
  CouplingState s;
  s.global_ref = global;
  s.lumen_ref = std::make_shared<const Mesh>(global->extract_subdomain(Subdomain::Lumen));
  s.wall_ref = std::make_shared<const Mesh>(global->extract_subdomain(Subdomain::Wall));
  s.map = build_interface_map(*s.lumen_ref, *s.wall_ref);

  // Unloaded wall equilibrium, with the lumen conforming to it.
  const SolidState ref = SolidState::reference(s.wall_ref);
  s.solid = newton_solve(ref, InterfaceLoad::none(ref.phi.space()), cfg.wall, cfg.newton).state;
  Field data(FeSpace(s.lumen_ref, 2, 2));
  for (std::size_t k = 0; k < s.map.lumen_nodes.size(); ++k) {
    for (int c = 0; c < 2; ++c) data(s.map.lumen_nodes[k], c) = s.solid.xi(s.map.wall_nodes[k], c);
  }
  s.xi_f = harmonic_extend(data);
  std::vector<Point2> disp(s.lumen_ref->num_vertices());
  for (std::size_t i = 0; i < disp.size(); ++i) disp[i] = s.xi_f.vec(static_cast<int>(i));
  const auto mesh = std::make_shared<const Mesh>(s.lumen_ref->moved(disp));
  s.fluid = FluidState::at_rest(mesh);
  s.history = ViscosityHistory(cfg.fluid.dt);
  s.mu = viscosity_field(s.fluid.v, 0.0, cfg, s.history);
  return s;
}

double interface_mismatch(const CouplingState& s) {
  const int nv = static_cast<int>(s.lumen_ref->num_vertices());
  double worst = 0.0;
  for (std::size_t k = 0; k < s.map.lumen_nodes.size(); ++k) {
    const int ln = s.map.lumen_nodes[k];
    if (ln >= nv) continue;
    worst = std::max(worst, distance(s.fluid.mesh->vertex(ln), s.solid.phi.vec(s.map.wall_nodes[k])));
  }
  return worst;
}

StepDiagnostics coupling_step(CouplingState& s, const CouplingConfig& cfg) {
  const double dt = cfg.fluid.dt;
  const double t_next = (s.n + 1) * dt;
  StepDiagnostics d;
  d.step = s.n + 1;
  d.time = t_next;
  try {
    FluidState next = fluid_step(s.fluid, s.mu, cfg.fluid, t_next);
    const InterfaceTraction tr = interface_traction(next, s.mu);
    const InterfaceLoad load = to_wall_load(tr, s.map, s.solid.phi.space());
    NewtonResult nr = newton_solve(s.solid, load, cfg.wall, cfg.newton);

    Field data(s.xi_f.space());
    for (std::size_t k = 0; k < s.map.lumen_nodes.size(); ++k) {
      for (int c = 0; c < 2; ++c) data(s.map.lumen_nodes[k], c) = nr.state.xi(s.map.wall_nodes[k], c);
    }
    Field xi_new = harmonic_extend(data);
    std::vector<Point2> disp(s.lumen_ref->num_vertices());
    for (std::size_t i = 0; i < disp.size(); ++i) disp[i] = xi_new.vec(static_cast<int>(i));
    const auto mesh = std::make_shared<const Mesh>(s.lumen_ref->moved(disp));
    const Field w = domain_velocity(xi_new, s.xi_f, dt);

    s.fluid = next.rebased(mesh);
    s.fluid.w = w.rebased(mesh);
    s.solid = std::move(nr.state);
    s.xi_f = std::move(xi_new);
    s.n += 1;
    s.t = t_next;
    s.mu = viscosity_field(s.fluid.v, t_next, cfg, s.history, &d.viscosity_clamped);

    d.newton_iterations = nr.iterations;
    d.newton_updates = nr.update_norms;
    d.newton_residual = nr.residual_norm;
  } catch (const SolverError& e) {
    throw SolverError("step " + std::to_string(s.n + 1) + ": " + e.what());
  } catch (const MeshError& e) {
    throw SolverError("step " + std::to_string(s.n + 1) + ": " + e.what());
  }
  d.divergence = divergence_residual(s.fluid);
  d.min_quality = s.fluid.mesh->min_quality();
  d.min_jacobian = min_jacobian(s.solid);
  d.inlet_flux = -boundary_flux(s.fluid.v, BoundaryLabel::Inlet);
  d.outlet_flux = boundary_flux(s.fluid.v, BoundaryLabel::Outlet);
  for (int n = 0; n < s.fluid.v.space().num_nodes(); ++n) d.max_speed = std::max(d.max_speed, norm(s.fluid.v.vec(n)));
  for (int n = 0; n < s.solid.xi.space().num_nodes(); ++n) {
    d.max_wall_displacement = std::max(d.max_wall_displacement, norm(s.solid.xi.vec(n)));
  }
  d.interface_mismatch = interface_mismatch(s);
  return d;
}

}  // namespace hemofsi
