//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <array>
#include <vector>

namespace hemofsi {

struct QuadPoint {
  std::array<double, 3> bary{};
  double weight = 0.0;
};

/// Triangle rule on the reference triangle (0,0),(1,0),(0,1); weights sum
/// to its area 1/2. Scale weights by 2|T| on a physical element.
struct Quadrature {
  int order = 0;
  std::vector<QuadPoint> points;
};

/// order 2: 3-point rule, exact for degree 2.
/// order 5: 7-point Dunavant rule, exact for degree 5.
/// Other orders throw Error.
const Quadrature& quadrature_rule(int order);

/// 3-point Gauss-Legendre rule on [0, 1] (exact for degree 5).
struct EdgeQuadPoint {
  double s = 0.0;
  double weight = 0.0;
};
const std::array<EdgeQuadPoint, 3>& edge_quadrature();

}  // namespace hemofsi
