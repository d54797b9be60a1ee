//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <deque>

#include <Eigen/Core>
#include <Eigen/LU>

#include "hemofsi/fe_space.hpp"

namespace hemofsi {

using Mat2 = Eigen::Matrix2d;
/// Fourth-order 2D tensor acting on row-major flattened 2x2 matrices
/// (index 2*i + j).
using Tensor4 = Eigen::Matrix4d;

/// Carreau law parameters; viscosities in Pa*s, lambda in s.
struct CarreauParams {
  double mu0 = 0.056;
  double mu_inf = 0.00345;
  double lambda = 3.313;
  double n = 0.3568;

  void validate() const;
};

/// Strain-energy coefficients of W = C0 + C1 (I1 - 2) + C2 (I2 - 2)^2 with
/// I1 = tr(F^T F), I2 = det(F^T F). Stress comes out in the units of the
/// coefficients (N/cm^2 for the defaults).
struct HyperelasticParams {
  double c0 = 110.0;
  double c1 = 100.0;
  double c2 = 110.0;

  void validate() const;
  HyperelasticParams scaled(double factor) const { return {c0 * factor, c1 * factor, c2 * factor}; }
};

/// Young's modulus (MPa by default) and Poisson ratio; derived Lame
/// constants in the units of E.
struct LameParams {
  double young = 14.5;
  double poisson = 0.492;

  void validate() const;
  double mu() const { return young / (2.0 * (1.0 + poisson)); }
  double lambda() const { return young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson)); }
};

struct SymTensor2 {
  double s11 = 0.0;
  double s22 = 0.0;
  double s12 = 0.0;

  static SymTensor2 from(const Mat2& m) { return {m(0, 0), m(1, 1), 0.5 * (m(0, 1) + m(1, 0))}; }
  Mat2 matrix() const {
    Mat2 m;
    m << s11, s12, s12, s22;
    return m;
  }
  double trace() const { return s11 + s22; }
};

/// sqrt(2 tr(D^2)) with D the symmetric part of grad_v.
double shear_rate(const Mat2& grad_v);

/// mu_inf + (mu0 - mu_inf) (1 + (lambda gamma_dot)^2)^((n - 1) / 2).
double carreau_viscosity(double gamma_dot, const CarreauParams& p);
/// Same law with explicit coefficients.
double carreau_viscosity(double gamma_dot, double mu0, double mu_inf, double lambda, double n);

/// Viscosity clamp for the time-shifted coefficients, Pa*s.
inline constexpr double kViscosityFloor = 1e-4;

/// Ring buffer of the five most recent viscosity fields (Pa*s) and the
/// step counter k of the history-dependent law.
class ViscosityHistory {
 public:
  static constexpr int kDepth = 5;

  ViscosityHistory() = default;
  explicit ViscosityHistory(double dt);

  int k() const { return k_; }
  double dt() const { return dt_; }
  const std::deque<Field>& fields() const { return fields_; }

  /// Local-in-time average on the given space: 0.056 at k = 0, 0.035 for
  /// 1 <= k <= 4, the pointwise mean of the stored fields afterwards.
  Field local_average(const FeSpace& space) const;
  void push(Field mu);

 private:
  double dt_ = 0.01;
  int k_ = 0;
  std::deque<Field> fields_;
};

struct ModifiedCarreauResult {
  Field mu;                   // Pa*s
  bool clamped = false;       // some mu_inf,k hit kViscosityFloor
  double min_mu_inf_k = 0.0;  // before clamping
};

/// One update of the history-dependent Carreau law at time t = k dt,
/// pushing the result into the history. gamma_dot is a scalar field.
ModifiedCarreauResult modified_carreau_step(ViscosityHistory& hist, const Field& gamma_dot, double t,
                                            const CarreauParams& p);

/// W(F); requires det F > 0.
double strain_energy(const Mat2& f, const HyperelasticParams& p);
/// det(F) F^{-T}; in 2D [[a,b],[c,d]] -> [[d,-c],[-b,a]].
Mat2 cofactor(const Mat2& f);
/// Directional derivative of the cofactor (constant, since cof is linear).
inline Mat2 cof_derivative(const Mat2& h) { return cofactor(h); }
/// The constant tensor of cof_derivative.
Tensor4 cof_tangent();
/// First Piola-Kirchhoff stress 2 C1 F + 4 C2 (I2 - 2) I2 F^{-T}. Throws
/// SolverError when det F <= 0.
Mat2 first_piola(const Mat2& f, const HyperelasticParams& p);
/// dP/dF contracted with a direction H.
Mat2 piola_derivative(const Mat2& f, const Mat2& h, const HyperelasticParams& p);
Tensor4 piola_tangent(const Mat2& f, const HyperelasticParams& p);

/// 2 mu eps + lambda tr(eps) Id, in the units of E.
SymTensor2 hooke_stress(const SymTensor2& eps, const LameParams& lame);
/// sqrt(((s11 - s22) / 2)^2 + s12^2).
double max_shear(const SymTensor2& sigma);

}  // namespace hemofsi
