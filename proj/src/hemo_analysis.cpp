//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/hemo_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "hemofsi/error.hpp"
#include "hemofsi/fe_tools.hpp"
#include "hemofsi/materials.hpp"
#include "hemofsi/quadrature.hpp"
#include "hemofsi/units.hpp"

namespace hemofsi {

namespace {

// Mean of a scalar field (or of one component) over triangle t.
double element_mean(const Field& f, int t, int component = 0) {
  double s = 0.0;
  for (const auto& qp : quadrature_rule(2).points) s += 2.0 * qp.weight * evaluate(f, t, qp.bary)[static_cast<std::size_t>(component)];
  return s;
}

double vertex_value(const Field& f, int vertex) {
  // Vertex nodes come first for both degrees.
  return f(vertex, 0);
}

}  // namespace

Field max_shear_field(const Field& v, const Field& p, const Field& mu) {
  const FeSpace s(v.space().mesh_ptr(), 1, 1);
  const auto grads = recover_gradient(v);
  Field out(s);
  for (int i = 0; i < s.num_nodes(); ++i) {
    const Mat2& g = grads[static_cast<std::size_t>(i)];
    const double mu_p = units::from_pascal_seconds(vertex_value(mu, i));
    const Mat2 sigma = mu_p * (g + g.transpose()) - vertex_value(p, i) * Mat2::Identity();
    out(i) = max_shear(SymTensor2::from(sigma));
  }
  return out;
}

Field speed_field(const Field& v) {
  const FeSpace s(v.space().mesh_ptr(), 1, 1);
  Field out(s);
  for (int i = 0; i < s.num_nodes(); ++i) out(i) = norm(v.vec(i));
  return out;
}

AverageTracker::AverageTracker(const FeSpace& scalar_space, double mu0, const Field& speed0,
                               const Field& displacement0)
    : k_(0), mu_(Field::constant(scalar_space, mu0)), speed_(speed0), disp_(displacement0) {}

void AverageTracker::update(const Field& mu, const Field& speed, const Field& displacement) {
  if (mu.values().size() != mu_.values().size() || speed.values().size() != speed_.values().size() ||
      displacement.values().size() != disp_.values().size()) {
    throw Error("average tracker update with mismatched fields");
  }
  const double w = 1.0 / (k_ + 2);
  const double keep = (k_ + 1) * w;
  mu_.values() = keep * mu_.values() + w * mu.values();
  speed_.values() = keep * speed_.values() + w * speed.values();
  disp_.values() = keep * disp_.values() + w * displacement.values();
  ++k_;
}

Point2 SolidificationRegion::centroid(const Mesh& mesh) const {
  Point2 c{};
  double a = 0.0;
  for (int t : triangles) {
    c += mesh.area(t) * mesh.centroid(t);
    a += mesh.area(t);
  }
  return a > 0.0 ? c * (1.0 / a) : c;
}

std::vector<std::vector<int>> connected_components(const Mesh& mesh, const std::vector<int>& triangles) {
  std::vector<char> in(mesh.num_triangles(), 0);
  for (int t : triangles) in[static_cast<std::size_t>(t)] = 1;
  std::vector<char> seen(mesh.num_triangles(), 0);
  std::vector<std::vector<int>> out;
  for (int start : triangles) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!q.empty()) {
      const int t = q.front();
      q.pop();
      comp.push_back(t);
      for (int j = 0; j < 3; ++j) {
        const int nb = mesh.neighbor(t, j);
        if (nb >= 0 && in[static_cast<std::size_t>(nb)] && !seen[static_cast<std::size_t>(nb)]) {
          seen[static_cast<std::size_t>(nb)] = 1;
          q.push(nb);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

SolidificationRegion detect_regions(const Field& mu_avg, const Field& speed_avg, const DetectionParams& params) {
  const Mesh& mesh = mu_avg.mesh();
  if (mu_avg.space().arity() != 1 || speed_avg.space().arity() != 1) {
    throw Error("detection expects scalar viscosity and speed fields");
  }
  if (speed_avg.mesh().num_triangles() != mesh.num_triangles()) throw Error("detection fields on different meshes");
  SolidificationRegion r;
  const std::size_t nt = mesh.num_triangles();
  r.high_viscosity.assign(nt, 0);
  r.slow.assign(nt, 0);
  std::vector<int> both;
  for (int t = 0; t < static_cast<int>(nt); ++t) {
    r.high_viscosity[static_cast<std::size_t>(t)] = element_mean(mu_avg, t) > params.mu_threshold;
    r.slow[static_cast<std::size_t>(t)] = element_mean(speed_avg, t) < params.speed_threshold;
    if (r.high_viscosity[static_cast<std::size_t>(t)] && r.slow[static_cast<std::size_t>(t)]) both.push_back(t);
  }
  const auto comps = connected_components(mesh, both);
  r.candidate_components = static_cast<int>(comps.size());
  double best = -1.0;
  for (const auto& c : comps) {
    SolidificationRegion tmp;
    tmp.triangles = c;
    if (!(tmp.centroid(mesh).x > params.downstream_of)) continue;
    double a = 0.0;
    for (int t : c) a += mesh.area(t);
    if (a > best) {
      best = a;
      r.triangles = c;
    }
  }
  return r;
}

std::vector<std::vector<int>> detect_recirculation(const Field& v, double threshold) {
  if (v.space().arity() != 2) throw Error("recirculation needs a vector field");
  const Mesh& mesh = v.mesh();
  std::vector<int> reverse;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    if (element_mean(v, t, 0) < -threshold) reverse.push_back(t);
  }
  return connected_components(mesh, reverse);
}

std::vector<ProbePoint> default_probes(const StenosisGeometry& g) {
  const double xc = g.bump_center;
  const double h = g.height;
  const double apex = g.bump(xc);
  return {
      {"A", {xc, apex + 0.05 * h}},
      {"B", {xc + g.bump_half_width, 0.05 * h}},
      {"C", {xc + 2.0 * g.bump_half_width, 0.15 * h}},
  };
}

std::vector<ProbeSample> probe(const Field& mu, const Field& max_shear, const Field& v,
                               const std::vector<ProbePoint>& points) {
  std::vector<ProbeSample> out;
  out.reserve(points.size());
  for (const auto& pt : points) {
    ProbeSample s;
    int hint = -1;
    const auto m = interpolate(mu, pt.position, &hint);
    if (m) {
      s.inside = true;
      s.mu = (*m)[0];
      s.max_shear = (*interpolate(max_shear, pt.position, &hint))[0];
      const auto vv = *interpolate(v, pt.position, &hint);
      s.speed = std::hypot(vv[0], vv[1]);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace hemofsi
