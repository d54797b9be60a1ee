//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include "hemofsi/mesh.hpp"

namespace hemofsi {

/// Which wall boundaries are clamped. `Outer` clamps the outer wall
/// surfaces and leaves the end caps traction-free; `Ends` does the reverse.
enum class WallSupport { Outer, Ends };

/// Straight channel of length L and height H between two walls of
/// thickness h_w, with a cosine bump of height beta*H on the lower wall.
/// Lengths in cm.
struct StenosisGeometry {
  double length = 6.0;
  double height = 1.0;
  double wall_thickness = 0.1;
  double bump_center = 3.0;
  double bump_half_width = 0.75;
  double occlusion = 0.4;
  double mesh_size = 0.1;
  WallSupport support = WallSupport::Outer;

  /// Throws MeshError naming the first offending parameter.
  void validate() const;
  /// Lower-wall profile b(x): lumen floor height.
  double bump(double x) const;
  /// Area of the bump, beta*H*w_b.
  double bump_area() const;
  /// L*H + 2*L*h_w - bump area.
  double total_area() const;
  /// Mesh size used inside the walls.
  double wall_mesh_size() const;
};

/// Conforming lumen + wall mesh. Lumen boundary: Inlet (x = 0), Outlet
/// (x = L), Interface (both lumen floors/ceilings). Wall boundaries are
/// FixedWall or OuterWall according to `geom.support`.
Mesh build_stenosed_artery(const StenosisGeometry& geom);

}  // namespace hemofsi
