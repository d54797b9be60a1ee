//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/structure_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "hemofsi/error.hpp"
#include "hemofsi/fe_tools.hpp"
#include "hemofsi/quadrature.hpp"

namespace hemofsi {

namespace {

using Local = Eigen::Matrix<double, 15, 15>;
using LocalVec = Eigen::Matrix<double, 15, 1>;

// e_c (x) g as a 2x2 matrix.
Mat2 outer_row(int c, const Point2& g) {
  Mat2 h = Mat2::Zero();
  h(c, 0) = g.x;
  h(c, 1) = g.y;
  return h;
}

double contract(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

std::array<int, 15> element_dofs(const FeSpace& vs, const FeSpace& ps, int t) {
  std::array<int, 15> dofs{};
  const int nv = vs.num_dofs();
  for (int i = 0; i < 6; ++i) {
    const int node = vs.element_node(t, i);
    dofs[static_cast<std::size_t>(2 * i)] = vs.dof(node, 0);
    dofs[static_cast<std::size_t>(2 * i + 1)] = vs.dof(node, 1);
  }
  for (int k = 0; k < 3; ++k) dofs[static_cast<std::size_t>(12 + k)] = nv + ps.element_node(t, k);
  return dofs;
}

}  // namespace

SolidState SolidState::reference(std::shared_ptr<const Mesh> mesh) {
  SolidState s;
  s.mesh = mesh;
  const FeSpace vs(mesh, 2, 2);
  s.phi = Field::from_vector_function(vs, [](const Point2& x) { return x; });
  s.xi = Field(vs);
  s.p = Field(FeSpace(mesh, 1, 1));
  return s;
}

void SolidState::sync_displacement() {
  const FeSpace& vs = phi.space();
  xi = Field(vs);
  for (int n = 0; n < vs.num_nodes(); ++n) {
    const Point2 x = vs.node_point(n);
    xi(n, 0) = phi(n, 0) - x.x;
    xi(n, 1) = phi(n, 1) - x.y;
  }
}

std::vector<Point2> SolidState::deformed_vertices() const {
  std::vector<Point2> out(mesh->num_vertices());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi.vec(static_cast<int>(i));
  return out;
}

void NewtonParams::validate() const {
  if (!(tol > 0.0)) throw ConfigError("newton.tol: must be positive");
  if (max_iterations < 1) throw ConfigError("newton.max_iterations: must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1e-2)) throw ConfigError("newton.epsilon: must lie in (0, 1e-2)");
  if (max_halvings < 0) throw ConfigError("newton.max_halvings: must be non-negative");
}

InterfaceLoad InterfaceLoad::none(const FeSpace& wall_space) {
  return uniform(wall_space, Mat2::Zero());
}

InterfaceLoad InterfaceLoad::uniform(const FeSpace& wall_space, const Mat2& sigma) {
  InterfaceLoad l;
  l.stress.assign(static_cast<std::size_t>(wall_space.num_nodes()), sigma);
  return l;
}

Eigen::VectorXd pack_solid(const SolidState& s) {
  Eigen::VectorXd x(s.phi.values().size() + s.p.values().size());
  x << s.phi.values(), s.p.values();
  return x;
}

SolidState unpack_solid(const SolidState& like, const Eigen::VectorXd& x) {
  SolidState s = like;
  const Eigen::Index nv = like.phi.values().size();
  s.phi.values() = x.head(nv);
  s.p.values() = x.tail(x.size() - nv);
  s.sync_displacement();
  return s;
}

std::vector<char> solid_dirichlet_mask(const SolidState& s) {
  const FeSpace& vs = s.phi.space();
  std::vector<char> mask(static_cast<std::size_t>(vs.num_dofs() + s.p.space().num_dofs()), 0);
  for (int n : vs.labelled_nodes(BoundaryLabel::FixedWall)) {
    mask[static_cast<std::size_t>(vs.dof(n, 0))] = 1;
    mask[static_cast<std::size_t>(vs.dof(n, 1))] = 1;
  }
  return mask;
}

SolidSystem assemble_solid_system(const SolidState& s, const InterfaceLoad& load, const HyperelasticParams& mat,
                                  double eps) {
  const Mesh& mesh = *s.mesh;
  const FeSpace& vs = s.phi.space();
  const FeSpace& ps = s.p.space();
  if (load.stress.size() != static_cast<std::size_t>(vs.num_nodes())) {
    throw Error("interface load does not match the wall space");
  }
  const int n = vs.num_dofs() + ps.num_dofs();
  const Tensor4 cof_t = cof_tangent();
  Triplets trip;
  trip.reserve(mesh.num_triangles() * 225);
  Eigen::VectorXd res = Eigen::VectorXd::Zero(n);

  auto scatter = [&](const std::array<int, 15>& dofs, const Local& ke, const LocalVec& re) {
    for (int r = 0; r < 15; ++r) {
      res[dofs[static_cast<std::size_t>(r)]] += re(r);
      for (int c = 0; c < 15; ++c) {
        if (ke(r, c) != 0.0) {
          trip.emplace_back(dofs[static_cast<std::size_t>(r)], dofs[static_cast<std::size_t>(c)], ke(r, c));
        }
      }
    }
  };

  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    const auto dofs = element_dofs(vs, ps, t);
    Local ke = Local::Zero();
    LocalVec re = LocalVec::Zero();
    for (const auto& qp : quadrature_rule(5).points) {
      const double wq = qp.weight * 2.0 * geom.area;
      const ShapeEval sh = eval_shapes(2, geom, qp.bary);
      const Mat2 f = gradient(s.phi, t, geom, qp.bary);
      const double j = f.determinant();
      if (!(j > 0.0)) throw SolverError("inverted wall element " + std::to_string(t));
      const double p = evaluate(s.p, t, qp.bary)[0];
      const Mat2 cof = cofactor(f);
      const Mat2 stress = first_piola(f, mat) + p * cof;
      const Tensor4 tangent = piola_tangent(f, mat) + p * cof_t;

      std::array<Mat2, 12> grads;
      for (int a = 0; a < 6; ++a) {
        for (int c = 0; c < 2; ++c) grads[static_cast<std::size_t>(2 * a + c)] = outer_row(c, sh.grad[static_cast<std::size_t>(a)]);
      }
      for (int r = 0; r < 12; ++r) {
        const Mat2& gr = grads[static_cast<std::size_t>(r)];
        re(r) += wq * contract(stress, gr);
        const Eigen::Vector4d grv(gr(0, 0), gr(0, 1), gr(1, 0), gr(1, 1));
        const Eigen::RowVector4d row = grv.transpose() * tangent;
        for (int c = 0; c < 12; ++c) {
          const Mat2& gc = grads[static_cast<std::size_t>(c)];
          ke(r, c) += wq * (row(0) * gc(0, 0) + row(1) * gc(0, 1) + row(2) * gc(1, 0) + row(3) * gc(1, 1));
        }
        const double cr = contract(cof, gr);
        for (int k = 0; k < 3; ++k) {
          const double v = wq * cr * qp.bary[static_cast<std::size_t>(k)];
          ke(r, 12 + k) += v;
          ke(12 + k, r) += v;
        }
      }
      for (int k = 0; k < 3; ++k) {
        const double psi_k = qp.bary[static_cast<std::size_t>(k)];
        re(12 + k) += wq * psi_k * (j - 1.0 - eps * p);
        for (int l = 0; l < 3; ++l) ke(12 + k, 12 + l) -= wq * eps * psi_k * qp.bary[static_cast<std::size_t>(l)];
      }
    }
    scatter(dofs, ke, re);
  }

  // Follower traction sigma cof(F) n0 on the interface.
  for (int e : mesh.labelled_edges(BoundaryLabel::Interface)) {
    const int t = mesh.edge_triangles(e)[0];
    int jl = 0;
    while (mesh.triangle_edge(t, jl) != e) ++jl;
    const ElementGeometry geom = element_geometry(mesh, t);
    const Point2 n0 = outward_normal(mesh, e, t);
    const Eigen::Vector2d nv(n0.x, n0.y);
    const double len = distance(mesh.vertex(mesh.edge(e)[0]), mesh.vertex(mesh.edge(e)[1]));
    const auto dofs = element_dofs(vs, ps, t);
    Local ke = Local::Zero();
    LocalVec re = LocalVec::Zero();
    for (const auto& qp : edge_quadrature()) {
      std::array<double, 3> bary{};
      bary[static_cast<std::size_t>(jl)] = 1.0 - qp.s;
      bary[static_cast<std::size_t>((jl + 1) % 3)] = qp.s;
      const double wq = qp.weight * len;
      const ShapeEval sh = eval_shapes(2, geom, bary);
      Mat2 sigma = Mat2::Zero();
      for (int a = 0; a < 6; ++a) {
        sigma += sh.phi[static_cast<std::size_t>(a)] * load.stress[static_cast<std::size_t>(vs.element_node(t, a))];
      }
      if (sigma.isZero(0.0)) continue;
      const Mat2 f = gradient(s.phi, t, geom, bary);
      const Eigen::Vector2d traction = sigma * cofactor(f) * nv;
      for (int a = 0; a < 6; ++a) {
        const double na = sh.phi[static_cast<std::size_t>(a)];
        if (na == 0.0) continue;
        for (int i = 0; i < 2; ++i) {
          re(2 * a + i) -= wq * na * traction(i);
          for (int b = 0; b < 6; ++b) {
            for (int c = 0; c < 2; ++c) {
              const Eigen::Vector2d dt = sigma * cofactor(outer_row(c, sh.grad[static_cast<std::size_t>(b)])) * nv;
              ke(2 * a + i, 2 * b + c) -= wq * na * dt(i);
            }
          }
        }
      }
    }
    scatter(dofs, ke, re);
  }

  SolidSystem sys;
  sys.residual = std::move(res);
  sys.tangent.resize(n, n);
  sys.tangent.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

double min_jacobian(const SolidState& s) {
  double jmin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < static_cast<int>(s.mesh->num_triangles()); ++t) {
    const ElementGeometry geom = element_geometry(*s.mesh, t);
    for (const auto& qp : quadrature_rule(5).points) {
      jmin = std::min(jmin, gradient(s.phi, t, geom, qp.bary).determinant());
    }
  }
  return jmin;
}

NewtonResult newton_solve(const SolidState& state0, const InterfaceLoad& load, const HyperelasticParams& mat,
                          const NewtonParams& params) {
  params.validate();
  mat.validate();
  const HyperelasticParams mat_cgs = mat.scaled(1e5);
  const double eps = params.epsilon_cgs();
  const std::vector<char> fixed = solid_dirichlet_mask(state0);
  const Eigen::Index nv = state0.phi.values().size();

  NewtonResult out;
  out.state = state0;
  Eigen::VectorXd x = pack_solid(state0);
  // FixedWall nodes sit exactly at their reference positions.
  for (int node : state0.phi.space().labelled_nodes(BoundaryLabel::FixedWall)) {
    const Point2 ref = state0.phi.space().node_point(node);
    x[state0.phi.space().dof(node, 0)] = ref.x;
    x[state0.phi.space().dof(node, 1)] = ref.y;
  }
  SolidState cur = unpack_solid(state0, x);
  if (!(min_jacobian(cur) > 0.0)) throw SolverError("initial wall state is inverted");

  for (int k = 1; k <= params.max_iterations; ++k) {
    const SolidSystem sys = assemble_solid_system(cur, load, mat_cgs, eps);
    const Eigen::VectorXd delta =
        solve_with_dirichlet(sys.tangent, -sys.residual, fixed, Eigen::VectorXd::Zero(sys.residual.size()));
    const double dnorm = delta.head(nv).norm();
    out.update_norms.push_back(dnorm);

    double alpha = 1.0;
    SolidState trial = unpack_solid(cur, x + delta);
    int halvings = 0;
    while (!(min_jacobian(trial) > 0.0)) {
      if (++halvings > params.max_halvings) {
        throw SolverError("wall Newton step inverts the mesh after " + std::to_string(params.max_halvings) +
                          " halvings at iteration " + std::to_string(k));
      }
      alpha *= 0.5;
      trial = unpack_solid(cur, x + alpha * delta);
    }
    x += alpha * delta;
    cur = std::move(trial);
    out.iterations = k;
    if (alpha == 1.0 && dnorm < params.tol) {
      Eigen::VectorXd r = assemble_solid_system(cur, load, mat_cgs, eps).residual;
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (fixed[static_cast<std::size_t>(i)]) r[i] = 0.0;
      }
      out.residual_norm = r.norm();
      out.state = std::move(cur);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "wall Newton did not converge in " << params.max_iterations << " iterations; update norms:";
  for (double d : out.update_norms) msg << ' ' << d;
  throw SolverError(msg.str());
}

double incompressibility_residual(const SolidState& s) {
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(s.mesh->num_triangles()); ++t) {
    const ElementGeometry geom = element_geometry(*s.mesh, t);
    for (const auto& qp : quadrature_rule(5).points) {
      const double d = gradient(s.phi, t, geom, qp.bary).determinant() - 1.0;
      sum += qp.weight * 2.0 * geom.area * d * d;
    }
  }
  return std::sqrt(sum);
}

}  // namespace hemofsi
