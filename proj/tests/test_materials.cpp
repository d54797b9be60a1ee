//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Eigenvalues>

#include "hemofsi/error.hpp"
#include "hemofsi/materials.hpp"
#include "hemofsi/units.hpp"

using namespace hemofsi;

namespace {

// Independent strain energy, written from the invariants directly.
double energy_oracle(const Mat2& f) {
  const Mat2 c = f.transpose() * f;
  const double i1 = c.trace();
  const double i2 = c.determinant();
  return 110.0 + 100.0 * (i1 - 2.0) + 110.0 * (i2 - 2.0) * (i2 - 2.0);
}

Mat2 fd_piola(const Mat2& f, double h) {
  Mat2 p;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Mat2 e = Mat2::Zero();
      e(i, j) = h;
      p(i, j) = (energy_oracle(f + e) - energy_oracle(f - e)) / (2.0 * h);
    }
  }
  return p;
}

Mat2 random_admissible(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  std::uniform_real_distribution<double> target(0.5, 2.0);
  for (;;) {
    Mat2 f = Mat2::Identity();
    f(0, 0) += u(rng);
    f(0, 1) += u(rng);
    f(1, 0) += u(rng);
    f(1, 1) += u(rng);
    const double j = f.determinant();
    if (j <= 0.05) continue;
    // Rescale so det F lands in [0.5, 2].
    return f * std::sqrt(target(rng) / j);
  }
}

double rel_err(const Mat2& a, const Mat2& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST_CASE("shear rate") {
  CHECK(shear_rate(Mat2::Zero()) == 0.0);
  Mat2 g = Mat2::Zero();
  g(0, 1) = 1.0;
  CHECK(shear_rate(g) == doctest::Approx(1.0).epsilon(1e-15));
  g = Mat2::Zero();
  g(0, 0) = 1.0;
  g(1, 1) = -1.0;
  CHECK(shear_rate(g) == doctest::Approx(2.0).epsilon(1e-15));
  // Explicit 2D form: 2 (du/dx)^2 + 2 (dv/dy)^2 + (du/dy + dv/dx)^2.
  g << 0.3, -1.2, 0.7, 2.5;
  const double explicit_form = std::sqrt(2 * 0.09 + 2 * 6.25 + std::pow(-1.2 + 0.7, 2));
  CHECK(shear_rate(g) == doctest::Approx(explicit_form).epsilon(1e-14));
}

TEST_CASE("Carreau viscosity") {
  const CarreauParams p;
  CHECK(carreau_viscosity(0.0, p) == 0.056);
  // High-precision scalar evaluation of the law at gamma_dot = 1:
  // 0.00345 + 0.05255 * (1 + 3.313^2)^(-0.3216) = 0.02697...
  const long double bracket = std::pow(1.0L + 3.313L * 3.313L, (0.3568L - 1.0L) / 2.0L);
  const double oracle = static_cast<double>(0.00345L + 0.05255L * bracket);
  CHECK(carreau_viscosity(1.0, p) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(carreau_viscosity(1.0, p) == doctest::Approx(0.0270).epsilon(2e-3));
  CHECK(carreau_viscosity(1e6, p) - p.mu_inf <= 1e-4);
  double prev = carreau_viscosity(1e-4, p);
  for (int i = 1; i < 1000; ++i) {
    const double g = std::pow(10.0, -4.0 + 10.0 * i / 999.0);
    const double mu = carreau_viscosity(g, p);
    CHECK(mu < prev);
    CHECK(mu > p.mu_inf);
    CHECK(mu <= p.mu0);
    prev = mu;
  }
  CarreauParams bad = p;
  bad.mu_inf = 0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("modified Carreau history") {
  const auto mesh = std::make_shared<const Mesh>(make_rectangle_mesh(0, 1, 0, 1, 2, 2));
  const FeSpace s(mesh, 1, 1);
  const CarreauParams p;
  ViscosityHistory hist(0.01);
  CHECK(hist.local_average(s).values().maxCoeff() == 0.056);
  const Field zero_rate(s);
  modified_carreau_step(hist, zero_rate, 0.0, p);
  modified_carreau_step(hist, zero_rate, 0.01, p);
  CHECK(hist.k() == 2);
  CHECK(hist.local_average(s).values().minCoeff() == 0.035);
  CHECK(hist.local_average(s).values().maxCoeff() == 0.035);
  CHECK_THROWS_AS(modified_carreau_step(hist, zero_rate, 0.5, p), Error);

  ViscosityHistory five(0.01);
  for (int i = 0; i < 5; ++i) five.push(Field::constant(s, 0.04));
  CHECK(five.k() == 5);
  CHECK(five.fields().size() == 5);
  CHECK(five.local_average(s).values().maxCoeff() == doctest::Approx(0.04).epsilon(1e-15));
  const auto r = modified_carreau_step(five, zero_rate, 0.05, p);
  const double mu0_k = 0.056 - 0.05 * 1e-3 * std::pow(0.04, 0.2);
  CHECK(r.mu.values()[0] == doctest::Approx(mu0_k).epsilon(1e-14));
  CHECK_FALSE(r.clamped);
  CHECK(five.fields().size() == 5);

  ViscosityHistory late(100.0);
  for (int i = 0; i < 5; ++i) late.push(Field::constant(s, 0.04));
  const auto clamped = modified_carreau_step(late, Field::constant(s, 1e6), 500.0, p);
  CHECK(clamped.clamped);
  CHECK(clamped.mu.values().minCoeff() >= kViscosityFloor);
}

TEST_CASE("cofactor") {
  CHECK(cofactor(Mat2::Identity()) == Mat2::Identity());
  Mat2 f;
  f << 1, 2, 3, 4;
  Mat2 expect;
  expect << 4, -3, -2, 1;
  CHECK(cofactor(f) == expect);
  CHECK((cofactor(f) - f.determinant() * f.inverse().transpose()).norm() < 1e-14);
  // The tangent tensor applied to H equals cof(H).
  Mat2 h;
  h << 0.3, -0.1, 2.0, 0.5;
  Eigen::Vector4d hv(h(0, 0), h(0, 1), h(1, 0), h(1, 1));
  const Eigen::Vector4d out = cof_tangent() * hv;
  CHECK(out(0) == cofactor(h)(0, 0));
  CHECK(out(1) == cofactor(h)(0, 1));
  CHECK(out(2) == cofactor(h)(1, 0));
  CHECK(out(3) == cofactor(h)(1, 1));
}

TEST_CASE("first Piola stress") {
  const HyperelasticParams p;
  CHECK((first_piola(Mat2::Identity(), p) + 240.0 * Mat2::Identity()).norm() < 1e-12);
  Mat2 f = Mat2::Zero();
  f(0, 0) = 2.0;
  f(1, 1) = 0.5;
  Mat2 expect = Mat2::Zero();
  expect(0, 0) = 180.0;
  expect(1, 1) = -780.0;
  CHECK((first_piola(f, p) - expect).norm() < 1e-10);
  CHECK(rel_err(fd_piola(f, 1e-5), expect) < 1e-6);
  Mat2 flip = Mat2::Identity();
  flip(1, 1) = -1.0;
  CHECK_THROWS_AS(first_piola(flip, p), SolverError);

  std::mt19937 rng(42);
  for (int k = 0; k < 100; ++k) {
    const Mat2 fk = random_admissible(rng);
    CHECK(rel_err(first_piola(fk, p), fd_piola(fk, 1e-5)) <= 1e-6);
    CHECK(strain_energy(fk, p) == doctest::Approx(energy_oracle(fk)).epsilon(1e-13));
  }
}

TEST_CASE("Piola tangent") {
  const HyperelasticParams p;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Mat2 f = random_admissible(rng);
    Mat2 h, a, b;
    h << u(rng), u(rng), u(rng), u(rng);
    a << u(rng), u(rng), u(rng), u(rng);
    b << u(rng), u(rng), u(rng), u(rng);
    const double step = 1e-5;
    const Mat2 fd = (first_piola(f + step * h, p) - first_piola(f - step * h, p)) / (2.0 * step);
    CHECK(rel_err(piola_derivative(f, h, p), fd) <= 1e-6);
    // Major symmetry of the Hessian of W.
    const double ab = (a.array() * piola_derivative(f, b, p).array()).sum();
    const double ba = (b.array() * piola_derivative(f, a, p).array()).sum();
    CHECK(std::abs(ab - ba) <= 1e-10 * std::max(1.0, std::abs(ab)));
    const Tensor4 t = piola_tangent(f, p);
    CHECK((t - t.transpose()).norm() <= 1e-10 * t.norm());
  }
}

TEST_CASE("Lame constants and Hooke stress") {
  const LameParams lame;
  // mu = E / (2 (1 + nu)), lambda = E nu / ((1 + nu)(1 - 2 nu)).
  CHECK(std::abs(lame.mu() - 14.5 / (2.0 * 1.492)) <= 1e-12);
  CHECK(std::abs(lame.lambda() - 14.5 * 0.492 / (1.492 * 0.016)) <= 1e-12);
  CHECK(lame.mu() == doctest::Approx(4.859).epsilon(1e-3));
  CHECK(lame.lambda() == doctest::Approx(298.8).epsilon(1e-3));

  const SymTensor2 zero = hooke_stress({}, lame);
  CHECK(zero.s11 == 0.0);
  CHECK(zero.s12 == 0.0);
  const SymTensor2 id = hooke_stress({1.0, 1.0, 0.0}, lame);
  CHECK(id.s11 == doctest::Approx(2.0 * lame.mu() + 2.0 * lame.lambda()));
  CHECK(id.s22 == doctest::Approx(2.0 * lame.mu() + 2.0 * lame.lambda()));
  const SymTensor2 shear = hooke_stress({0.0, 0.0, 1.0}, lame);
  CHECK(shear.s12 == doctest::Approx(2.0 * lame.mu()));
  CHECK(shear.s11 == 0.0);

  const SymTensor2 a{0.1, -0.3, 0.25}, b{-0.7, 0.2, 0.05};
  const SymTensor2 sum = hooke_stress({a.s11 + b.s11, a.s22 + b.s22, a.s12 + b.s12}, lame);
  const SymTensor2 sa = hooke_stress(a, lame), sb = hooke_stress(b, lame);
  CHECK(sum.s11 == doctest::Approx(sa.s11 + sb.s11).epsilon(1e-14));
  CHECK(sum.s12 == doctest::Approx(sa.s12 + sb.s12).epsilon(1e-14));
  const SymTensor2 s3 = hooke_stress({3 * a.s11, 3 * a.s22, 3 * a.s12}, lame);
  CHECK(s3.s22 == doctest::Approx(3 * sa.s22).epsilon(1e-14));

  CHECK(units::from_megapascal(lame.mu()) == doctest::Approx(4.859e7).epsilon(1e-3));
}

TEST_CASE("maximum shear stress") {
  CHECK(max_shear({5.0, 5.0, 0.0}) == 0.0);
  CHECK(max_shear({2.0, 0.0, 0.0}) == 1.0);
  CHECK(max_shear({0.0, 0.0, 3.0}) == 3.0);
}
