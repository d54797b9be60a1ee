//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/quadrature.hpp"

#include <cmath>
#include <string>

#include "hemofsi/error.hpp"

namespace hemofsi {

namespace {

Quadrature make_order2() {
  Quadrature q;
  q.order = 2;
  const double w = 1.0 / 6.0;
  q.points = {{{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, w},
              {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, w},
              {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, w}};
  return q;
}

Quadrature make_order5() {
  const double r = std::sqrt(15.0);
  const double a1 = (6.0 - r) / 21.0;
  const double b1 = 1.0 - 2.0 * a1;
  const double a2 = (6.0 + r) / 21.0;
  const double b2 = 1.0 - 2.0 * a2;
  const double w0 = 9.0 / 80.0;
  const double w1 = (155.0 - r) / 2400.0;
  const double w2 = (155.0 + r) / 2400.0;
  Quadrature q;
  q.order = 5;
  q.points = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w0},
              {{b1, a1, a1}, w1}, {{a1, b1, a1}, w1}, {{a1, a1, b1}, w1},
              {{b2, a2, a2}, w2}, {{a2, b2, a2}, w2}, {{a2, a2, b2}, w2}};
  return q;
}

}  // namespace

const Quadrature& quadrature_rule(int order) {
  static const Quadrature q2 = make_order2();
  static const Quadrature q5 = make_order5();
  switch (order) {
    case 2: return q2;
    case 5: return q5;
    default: throw Error("unsupported quadrature order " + std::to_string(order));
  }
}

const std::array<EdgeQuadPoint, 3>& edge_quadrature() {
  static const std::array<EdgeQuadPoint, 3> rule = [] {
    const double d = 0.5 * std::sqrt(3.0 / 5.0);
    return std::array<EdgeQuadPoint, 3>{EdgeQuadPoint{0.5 - d, 5.0 / 18.0},
                                        EdgeQuadPoint{0.5, 8.0 / 18.0},
                                        EdgeQuadPoint{0.5 + d, 5.0 / 18.0}};
  }();
  return rule;
}

}  // namespace hemofsi
