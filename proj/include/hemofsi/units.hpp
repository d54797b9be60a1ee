//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

// The engine works in CGS (cm, g, s). Viscosities are poise, stresses
// dyn/cm^2. These factors convert the mixed units used in the literature.
namespace hemofsi::units {

inline constexpr double kPascalSecond = 10.0;      // 1 Pa.s  = 10 P
inline constexpr double kNewtonPerCm2 = 1.0e5;     // 1 N/cm2 = 1e5 dyn/cm2
inline constexpr double kMegaPascal = 1.0e7;       // 1 MPa   = 1e7 dyn/cm2
inline constexpr double kPascal = 10.0;            // 1 Pa    = 10 dyn/cm2

constexpr double from_pascal_seconds(double v) { return v * kPascalSecond; }
constexpr double to_pascal_seconds(double v) { return v / kPascalSecond; }
constexpr double from_newton_per_cm2(double v) { return v * kNewtonPerCm2; }
constexpr double to_newton_per_cm2(double v) { return v / kNewtonPerCm2; }
constexpr double from_megapascal(double v) { return v * kMegaPascal; }
constexpr double to_megapascal(double v) { return v / kMegaPascal; }

}  // namespace hemofsi::units
