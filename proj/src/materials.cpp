//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hemofsi/error.hpp"

namespace hemofsi {

void CarreauParams::validate() const {
  if (!(mu_inf > 0.0)) throw ConfigError("carreau.mu_inf: must be positive");
  if (!(mu0 > mu_inf)) throw ConfigError("carreau.mu0: must exceed mu_inf");
  if (!(lambda > 0.0)) throw ConfigError("carreau.lambda: must be positive");
  if (!(n > 0.0 && n < 1.0)) throw ConfigError("carreau.n: must lie in (0, 1)");
}

void HyperelasticParams::validate() const {
  if (!std::isfinite(c0)) throw ConfigError("wall.c0: must be finite");
  if (!(c1 > 0.0)) throw ConfigError("wall.c1: must be positive");
  if (!(c2 > 0.0)) throw ConfigError("wall.c2: must be positive");
}

void LameParams::validate() const {
  if (!(young > 0.0)) throw ConfigError("clot.young: must be positive");
  if (!(poisson > 0.0 && poisson < 0.5)) throw ConfigError("clot.poisson: must lie in (0, 0.5)");
}

double shear_rate(const Mat2& grad_v) {
  const Mat2 d = 0.5 * (grad_v + grad_v.transpose());
  return std::sqrt(2.0 * (d * d).trace());
}

double carreau_viscosity(double gamma_dot, double mu0, double mu_inf, double lambda, double n) {
  const double lg = lambda * gamma_dot;
  return mu_inf + (mu0 - mu_inf) * std::pow(1.0 + lg * lg, 0.5 * (n - 1.0));
}

double carreau_viscosity(double gamma_dot, const CarreauParams& p) {
  return carreau_viscosity(gamma_dot, p.mu0, p.mu_inf, p.lambda, p.n);
}

ViscosityHistory::ViscosityHistory(double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw Error("viscosity history needs a positive time step");
}

Field ViscosityHistory::local_average(const FeSpace& space) const {
  if (k_ == 0) return Field::constant(space, 0.056);
  if (k_ <= 4 || fields_.empty()) return Field::constant(space, 0.035);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(space.num_dofs());
  for (const auto& f : fields_) {
    if (f.values().size() != sum.size()) throw Error("viscosity history field size mismatch");
    sum += f.values();
  }
  return Field(space, sum / static_cast<double>(fields_.size()));
}

void ViscosityHistory::push(Field mu) {
  fields_.push_back(std::move(mu));
  while (fields_.size() > static_cast<std::size_t>(kDepth)) fields_.pop_front();
  ++k_;
}

ModifiedCarreauResult modified_carreau_step(ViscosityHistory& hist, const Field& gamma_dot, double t,
                                            const CarreauParams& p) {
  if (gamma_dot.space().arity() != 1) throw Error("shear-rate field must be scalar");
  const double expected = hist.k() * hist.dt();
  if (std::abs(t - expected) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw Error("modified Carreau step at t=" + std::to_string(t) + " does not match k*dt=" +
                std::to_string(expected));
  }
  const Field mu_hat = hist.local_average(gamma_dot.space());
  ModifiedCarreauResult out{Field(gamma_dot.space()), false, std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < gamma_dot.values().size(); ++i) {
    const double shift = t * 1e-3 * std::pow(mu_hat.values()[i], 0.2);
    double mu_inf_k = p.mu_inf - shift;
    double mu0_k = p.mu0 - shift;
    out.min_mu_inf_k = std::min(out.min_mu_inf_k, mu_inf_k);
    if (mu_inf_k < kViscosityFloor) {
      mu_inf_k = kViscosityFloor;
      out.clamped = true;
    }
    mu0_k = std::max(mu0_k, mu_inf_k);
    out.mu.values()[i] = carreau_viscosity(gamma_dot.values()[i], mu0_k, mu_inf_k, p.lambda, p.n);
  }
  hist.push(out.mu);
  return out;
}

double strain_energy(const Mat2& f, const HyperelasticParams& p) {
  const double j = f.determinant();
  if (!(j > 0.0)) throw SolverError("invalid deformation: det F <= 0");
  const double i1 = (f.transpose() * f).trace();
  const double i2 = j * j;
  return p.c0 + p.c1 * (i1 - 2.0) + p.c2 * (i2 - 2.0) * (i2 - 2.0);
}

Mat2 cofactor(const Mat2& f) {
  Mat2 c;
  c << f(1, 1), -f(1, 0), -f(0, 1), f(0, 0);
  return c;
}

Tensor4 cof_tangent() {
  Tensor4 t = Tensor4::Zero();
  for (int k = 0; k < 4; ++k) {
    Mat2 h = Mat2::Zero();
    h(k / 2, k % 2) = 1.0;
    const Mat2 c = cofactor(h);
    for (int r = 0; r < 4; ++r) t(r, k) = c(r / 2, r % 2);
  }
  return t;
}

Mat2 first_piola(const Mat2& f, const HyperelasticParams& p) {
  const double j = f.determinant();
  if (!(j > 0.0)) throw SolverError("invalid deformation: det F <= 0");
  // 4 C2 (I2 - 2) I2 F^{-T} = 4 C2 (J^3 - 2 J) cof F.
  return 2.0 * p.c1 * f + 4.0 * p.c2 * (j * j * j - 2.0 * j) * cofactor(f);
}

Mat2 piola_derivative(const Mat2& f, const Mat2& h, const HyperelasticParams& p) {
  const double j = f.determinant();
  if (!(j > 0.0)) throw SolverError("invalid deformation: det F <= 0");
  const Mat2 cof = cofactor(f);
  const double dj = (cof.array() * h.array()).sum();
  const double g = 4.0 * p.c2 * (j * j * j - 2.0 * j);
  const double dg = 4.0 * p.c2 * (3.0 * j * j - 2.0);
  return 2.0 * p.c1 * h + dg * dj * cof + g * cofactor(h);
}

Tensor4 piola_tangent(const Mat2& f, const HyperelasticParams& p) {
  Tensor4 t;
  for (int k = 0; k < 4; ++k) {
    Mat2 h = Mat2::Zero();
    h(k / 2, k % 2) = 1.0;
    const Mat2 d = piola_derivative(f, h, p);
    for (int r = 0; r < 4; ++r) t(r, k) = d(r / 2, r % 2);
  }
  return t;
}

SymTensor2 hooke_stress(const SymTensor2& eps, const LameParams& lame) {
  const double mu = lame.mu();
  const double la = lame.lambda();
  const double tr = eps.trace();
  return {2.0 * mu * eps.s11 + la * tr, 2.0 * mu * eps.s22 + la * tr, 2.0 * mu * eps.s12};
}

double max_shear(const SymTensor2& s) {
  return std::hypot(0.5 * (s.s11 - s.s22), s.s12);
}

}  // namespace hemofsi
