//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <cmath>

namespace hemofsi {

/// A point (or vector) in the plane, coordinates in cm.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Point2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

constexpr Point2 operator+(Point2 a, const Point2& b) { return a += b; }
constexpr Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
constexpr Point2 operator*(Point2 a, double s) { return a *= s; }
constexpr Point2 operator*(double s, Point2 a) { return a *= s; }

constexpr double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
constexpr Point2 midpoint(const Point2& a, const Point2& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
constexpr double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace hemofsi
