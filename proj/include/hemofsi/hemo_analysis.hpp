//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "hemofsi/fe_space.hpp"
#include "hemofsi/stenosis.hpp"

namespace hemofsi {

/// Nodal maximum shear stress (dyn/cm^2, degree 1) of 2 mu D(v) - p Id,
/// mu in Pa*s, from recovered vertex gradients.
Field max_shear_field(const Field& v, const Field& p, const Field& mu);

/// |v| at the mesh vertices (degree 1).
Field speed_field(const Field& v);

/// Running means with exact 1/(k+1) weights. Sample 0 of the viscosity is
/// the constant mu0.
class AverageTracker {
 public:
  AverageTracker() = default;
  /// Starts at k = 0 with mu_avg = mu0 and the initial speed and
  /// displacement fields.
  AverageTracker(const FeSpace& scalar_space, double mu0, const Field& speed0, const Field& displacement0);

  int k() const { return k_; }
  const Field& mu_avg() const { return mu_; }
  const Field& speed_avg() const { return speed_; }
  const Field& displacement_avg() const { return disp_; }

  void update(const Field& mu, const Field& speed, const Field& displacement);

 private:
  int k_ = 0;
  Field mu_;
  Field speed_;
  Field disp_;
};

struct DetectionParams {
  double mu_threshold = 0.04;   // Pa*s
  double speed_threshold = 0.1; // cm/s
  /// Components must have their centroid at x > downstream_of.
  double downstream_of = -std::numeric_limits<double>::infinity();
};

struct SolidificationRegion {
  std::vector<int> triangles;               // R_s, sorted
  std::vector<char> high_viscosity;         // D_mu membership per triangle
  std::vector<char> slow;                   // D_v membership per triangle
  int candidate_components = 0;             // components of the intersection
  double time = 0.0;                        // detection time t0
  bool empty() const { return triangles.empty(); }
  Point2 centroid(const Mesh& mesh) const;
};

/// Element-mean thresholding of the averaged viscosity and speed, keeping
/// the largest connected component downstream of params.downstream_of.
SolidificationRegion detect_regions(const Field& mu_avg, const Field& speed_avg, const DetectionParams& params);

/// Edge-connected components of a triangle set, each sorted.
std::vector<std::vector<int>> connected_components(const Mesh& mesh, const std::vector<int>& triangles);

/// Components of triangles whose element-mean x-velocity is below
/// -threshold.
std::vector<std::vector<int>> detect_recirculation(const Field& v, double threshold = 1e-3);

struct ProbePoint {
  std::string name;
  Point2 position;
};
/// Default probes: A just above the bump apex, B at the downstream foot of
/// the bump, C in the expected recirculation core behind it.
std::vector<ProbePoint> default_probes(const StenosisGeometry& g);

struct ProbeSample {
  double mu = 0.0;         // Pa*s
  double max_shear = 0.0;  // dyn/cm^2
  double speed = 0.0;      // cm/s
  bool inside = false;
};
/// Interpolated values at each point; points outside the mesh are flagged.
std::vector<ProbeSample> probe(const Field& mu, const Field& max_shear, const Field& v,
                               const std::vector<ProbePoint>& points);

}  // namespace hemofsi
