// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "hpbem/fd_oracle.hpp"
#include "hpbem/fields.hpp"
#include "hpbem/fracform.hpp"
#include "hpbem/interp.hpp"

using namespace hpbem;

namespace {

constexpr double pi = 3.14159265358979323846;

double coth(double x) { return 1.0 / std::tanh(x); }

ModeSpectrum sine_mode(int m, int n, int truncation, double amplitude = 1.0)
{
  ModeSpectrum s;
  s.kind = ModeKind::sine;
  s.truncation = truncation;
  s.coeff = Eigen::MatrixXd::Zero(truncation, truncation);
  s.coeff(m - 1, n - 1) = amplitude;
  return s;
}

TensorPolynomial random_polynomial(Rng& rng, int degree)
{
  Eigen::MatrixXd c(degree + 1, degree + 1);
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; j <= degree; ++j) c(i, j) = rng.uniform(-1.0, 1.0);
  return TensorPolynomial(c);
}

} // namespace

TEST_CASE("expand: orthonormality of the mode families")
{
  // f = 1, cosine kind: only the (0,0) coefficient survives
  const ModeSpectrum c = expand([](double, double) { return 1.0; }, ModeKind::cosine, 12);
  CHECK(c.coeff(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK((c.coeff.cwiseAbs().sum() - std::abs(c.coeff(0, 0))) <= 1e-12);

  // f = 2 sin(pi x1) sin(pi x2): u_11 = 1, everything else below 1e-12
  const ModeSpectrum s = expand(
      [](double a, double b) { return 2.0 * std::sin(pi * a) * std::sin(pi * b); },
      ModeKind::sine, 12);
  CHECK(s.coeff(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK((s.coeff.cwiseAbs().sum() - std::abs(s.coeff(0, 0))) <= 1e-12);
}

TEST_CASE("expand: Parseval defect of x1 against the analytic sine series")
{
  // Analytic series: u_mn = 2 * [(-1)^{m+1}/(m pi)] * [(1-(-1)^n)/(n pi)].
  const int m_cut = 16;
  double partial = 0.0;
  for (int m = 1; m <= m_cut; ++m)
    for (int n = 1; n <= m_cut; ++n) {
      const double um = (m % 2 ? 1.0 : -1.0) / (m * pi);
      const double un = (n % 2 ? 2.0 : 0.0) / (n * pi);
      partial += 4.0 * um * um * un * un;
    }
  const double l2sq = 1.0 / 3.0;
  const double defect = l2sq - partial; // analytic tail-sum oracle

  TensorPolynomial x1(1, 0);
  x1.coeff().col(0) = monomial_x_coefficients(1);
  const ModeSpectrum s = expand(x1, ModeKind::sine, m_cut);
  CHECK(s.parseval_sum() == doctest::Approx(partial).epsilon(1e-12));
  CHECK(l2sq - s.parseval_sum() == doctest::Approx(defect).epsilon(1e-10));
  CHECK(defect > 0.0);
  // The boundary term makes the sine series converge slowly: about 6% of the
  // squared norm is still in the tail at M = 16.
  CHECK(defect < 0.07 * l2sq);
  CHECK(defect > 0.05 * l2sq);
}

TEST_CASE("expand: resolution guard")
{
  CHECK_THROWS_AS(expand([](double, double) { return 1.0; }, ModeKind::sine, 16, 20),
                  std::invalid_argument);
  CHECK_THROWS_AS(edge_expand([](double) { return 1.0; }, 1, 16, 20), std::invalid_argument);
}

TEST_CASE("weight tables: positivity, monotonicity, duality")
{
  const int m_cut = 24;
  const FracWeightTable w12 = frac_weight_table(FracKind::tildeH12_K, m_cut);
  const FracWeightTable wm12 = frac_weight_table(FracKind::Hm12_K, m_cut);
  const FracWeightTable wt = frac_weight_table(FracKind::tildeHm12_K, m_cut);
  const FracWeightTable we = frac_weight_table(FracKind::tildeH12_edge, m_cut);

  CHECK((w12.weights.array() > 0.0).all());
  CHECK((wm12.weights.array() > 0.0).all());
  CHECK((wt.weights.array() > 0.0).all());
  CHECK((we.weights.array() > 0.0).all());
  CHECK(wt.weights(0, 0) == 1.0);

  for (int m = 1; m < m_cut; ++m) {
    CHECK(w12.weights(m, 0) > w12.weights(m - 1, 0));
    CHECK(w12.weights(0, m) > w12.weights(0, m - 1));
    CHECK(wm12.weights(m, 0) < wm12.weights(m - 1, 0));
    CHECK(we.weights(m, 0) > we.weights(m - 1, 0));
  }
  // decreasing in both index directions for the dual kinds on the cosine grid
  for (int m = 1; m <= m_cut; ++m)
    for (int n = 1; n <= m_cut; ++n) {
      CHECK(wt.weights(m, n) <= wt.weights(m - 1, n) + 1e-15);
      CHECK(wt.weights(m, n) <= wt.weights(m, n - 1) + 1e-15);
    }

  // duality: coth(lambda) * tanh(lambda) = 1 per mode, exactly
  for (int m = 1; m <= m_cut; ++m)
    for (int n = 1; n <= m_cut; ++n)
      CHECK(w12.weights(m - 1, n - 1) * wm12.weights(m - 1, n - 1) ==
            doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("inner products on K: separation-of-variables values")
{
  const int m_cut = 32;
  const double lam11 = pi * std::sqrt(2.0);

  const ModeSpectrum u = sine_mode(1, 1, m_cut);
  CHECK(ip_tildeH12_K(u, u) == doctest::Approx(lam11 * coth(lam11)).epsilon(1e-13));
  CHECK(ip_Hm12_K(u, u) == doctest::Approx(std::tanh(lam11) / lam11).epsilon(1e-13));

  // orthogonal modes pair to zero; bilinearity
  const ModeSpectrum v = sine_mode(2, 3, m_cut);
  CHECK(ip_tildeH12_K(u, v) == 0.0);
  CHECK(ip_tildeH12_K(sine_mode(1, 1, m_cut, 2.0), u) ==
        doctest::Approx(2.0 * ip_tildeH12_K(u, u)).epsilon(1e-14));

  // cosine side
  ModeSpectrum c0;
  c0.kind = ModeKind::cosine;
  c0.truncation = m_cut;
  c0.coeff = Eigen::MatrixXd::Zero(m_cut + 1, m_cut + 1);
  c0.coeff(0, 0) = 1.0;
  CHECK(ip_tildeHm12_K(c0, c0) == doctest::Approx(1.0));

  ModeSpectrum c10 = c0;
  c10.coeff.setZero();
  c10.coeff(1, 0) = 1.0;
  CHECK(ip_tildeHm12_K(c10, c10) == doctest::Approx(std::tanh(pi) / pi).epsilon(1e-13));

  CHECK_THROWS_AS(ip_tildeHm12_K(u, u), std::invalid_argument); // kind mismatch
  CHECK_THROWS_AS(ip_Hm12_K(c0, c0), std::invalid_argument);
}

TEST_CASE("edge inner product: values and orthogonality")
{
  const int m_cut = 32;
  EdgeModeSpectrum u;
  u.edge = 1;
  u.coeff = Eigen::VectorXd::Zero(m_cut);
  u.coeff(0) = 1.0;
  CHECK(ip_tildeH12_edge(u, u) == doctest::Approx(pi * coth(pi)).epsilon(1e-13));

  EdgeModeSpectrum v = u;
  v.coeff.setZero();
  v.coeff(4) = 1.0;
  CHECK(ip_tildeH12_edge(u, v) == 0.0);

  EdgeModeSpectrum w;
  w.edge = 2;
  w.coeff = Eigen::VectorXd::Zero(m_cut + 4);
  CHECK_THROWS_AS(ip_tildeH12_edge(u, w), std::invalid_argument);
}

TEST_CASE("edge projection of an edge bubble onto its own space is the identity")
{
  const int p = 5, m_cut = 64;
  const Eigen::MatrixXd bubbles = bubble_basis_coefficients(p); // (p+1) x (p-1)
  // spectra of the basis and the edge Gram, assembled here as an independent check
  Eigen::MatrixXd basis_sine(m_cut, p - 1);
  for (int j = 0; j < p - 1; ++j)
    basis_sine.col(j) = edge_expand_legendre(bubbles.col(j), 1, m_cut).coeff;
  const Eigen::VectorXd w = frac_weight_table(FracKind::tildeH12_edge, m_cut).weights.col(0);
  const Eigen::MatrixXd gram = basis_sine.transpose() * w.asDiagonal() * basis_sine;

  Rng rng(97);
  Eigen::VectorXd c(p - 1);
  for (int i = 0; i < p - 1; ++i) c(i) = rng.uniform(-1.0, 1.0);
  const Eigen::VectorXd psi_hat = basis_sine * c; // spectrum of a P^0_p(l) member
  const Eigen::VectorXd rhs = basis_sine.transpose() * w.asDiagonal() * psi_hat;
  const Eigen::VectorXd back = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);
  CHECK((back - c).norm() <= 1e-11 * (1.0 + c.norm()));
}

TEST_CASE("mean-reduction identity: <u,1> in tilde H^{-1/2} equals the integral")
{
  Rng rng(2024);
  const int m_cut = 64;
  ModeSpectrum one;
  one.kind = ModeKind::cosine;
  one.truncation = m_cut;
  one.coeff = Eigen::MatrixXd::Zero(m_cut + 1, m_cut + 1);
  one.coeff(0, 0) = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const TensorPolynomial u = random_polynomial(rng, 10);
    const ModeSpectrum s = expand(u, ModeKind::cosine, m_cut);
    CHECK(std::abs(ip_tildeHm12_K(s, one) - u.mean()) <= 1e-10 * (1.0 + u.l2_norm()));
  }
}

TEST_CASE("property: symmetry and positive definiteness on random spectra")
{
  Rng rng(5150);
  const int m_cut = 16;
  for (int trial = 0; trial < 10; ++trial) {
    ModeSpectrum u, v;
    u.kind = v.kind = ModeKind::sine;
    u.truncation = v.truncation = m_cut;
    u.coeff.resize(m_cut, m_cut);
    v.coeff.resize(m_cut, m_cut);
    for (int i = 0; i < m_cut; ++i)
      for (int j = 0; j < m_cut; ++j) {
        u.coeff(i, j) = rng.uniform(-1.0, 1.0);
        v.coeff(i, j) = rng.uniform(-1.0, 1.0);
      }
    CHECK(ip_tildeH12_K(u, v) == ip_tildeH12_K(v, u));
    CHECK(ip_Hm12_K(u, v) == ip_Hm12_K(v, u));
    CHECK(ip_tildeH12_K(u, u) > 0.0);
    CHECK(ip_Hm12_K(u, u) > 0.0);

    ModeSpectrum uc, vc;
    uc.kind = vc.kind = ModeKind::cosine;
    uc.truncation = vc.truncation = m_cut;
    uc.coeff.resize(m_cut + 1, m_cut + 1);
    vc.coeff.resize(m_cut + 1, m_cut + 1);
    for (int i = 0; i <= m_cut; ++i)
      for (int j = 0; j <= m_cut; ++j) {
        uc.coeff(i, j) = rng.uniform(-1.0, 1.0);
        vc.coeff(i, j) = rng.uniform(-1.0, 1.0);
      }
    CHECK(ip_tildeHm12_K(uc, vc) == ip_tildeHm12_K(vc, uc));
    CHECK(ip_tildeHm12_K(uc, uc) > 0.0);
  }

  // norm bound: tanh(lambda)/lambda < 1 gives |u|_{H^{-1/2}} <= |u|_{L^2}
  const Eigen::MatrixXd w = frac_weight_table(FracKind::Hm12_K, 64).weights;
  CHECK((w.array() < 1.0).all());
}

TEST_CASE("truncation convergence of the cosine forms: M = 32 vs 64")
{
  // Degree-10 polynomials normalized in L^2 (projections of bounded smooth
  // functions). The cosine coefficients decay like 1/m^2; the measured change
  // from doubling the truncation is below 2.3e-6 relative across seeds.
  Rng rng(31337);
  for (int trial = 0; trial < 5; ++trial) {
    const SmoothScalar s = random_smooth_scalar(rng);
    TensorPolynomial u = proj_L2(s.value, 10);
    u *= 1.0 / u.l2_norm();
    const ModeSpectrum s32 = expand(u, ModeKind::cosine, 32);
    const ModeSpectrum s64 = expand(u, ModeKind::cosine, 64);
    const double a = ip_tildeHm12_K(s32, s32);
    const double b = ip_tildeHm12_K(s64, s64);
    CHECK(std::abs(a - b) <= 5e-6 * std::abs(b));
  }
}

TEST_CASE("truncation convergence of the sine form: second-order tail decay")
{
  // Polynomials that do not vanish on the boundary have sine coefficients
  // decaying only like 1/m, so the H^{-1/2} product converges at rate M^{-2};
  // doubling M must shrink the increment by about a factor of four.
  Rng rng(733);
  for (int trial = 0; trial < 5; ++trial) {
    const SmoothScalar s = random_smooth_scalar(rng);
    const TensorPolynomial u = proj_L2(s.value, 10);
    double ip[3];
    int idx = 0;
    for (int m : {32, 64, 128}) {
      const ModeSpectrum t = expand(u, ModeKind::sine, m);
      ip[idx++] = ip_Hm12_K(t, t);
    }
    const double d1 = std::abs(ip[1] - ip[0]);
    const double d2 = std::abs(ip[2] - ip[1]);
    CHECK(d2 <= 0.5 * d1 + 1e-14);
  }
}

TEST_CASE("fd oracle: validation and grid-refinement agreement")
{
  CHECK_THROWS_AS(fd_oracle(FracKind::Hm12_K, {}, {}, 4), std::invalid_argument);
  CHECK_THROWS_AS(
      fd_oracle(FracKind::tildeH12_edge, [](double, double) { return 1.0; },
                [](double, double) { return 1.0; }, 16),
      std::invalid_argument);

  auto mode11 = [](double a, double b) { return 2.0 * std::sin(pi * a) * std::sin(pi * b); };
  const double lam11 = pi * std::sqrt(2.0);
  const double exact = std::tanh(lam11) / lam11;
  const double o16 = fd_oracle(FracKind::Hm12_K, mode11, mode11, 16);
  const double o32 = fd_oracle(FracKind::Hm12_K, mode11, mode11, 32);
  CHECK(std::abs(o32 - exact) < std::abs(o16 - exact));
  CHECK(std::abs(o32 - exact) <= 0.05 * exact);

  auto one = [](double, double) { return 1.0; };
  for (int n : {8, 16})
    CHECK(fd_oracle(FracKind::tildeHm12_K, one, one, n) == doctest::Approx(1.0).epsilon(0.02));

  auto edge_mode = [](double s) { return std::sqrt(2.0) * std::sin(pi * s); };
  const double oe = fd_oracle_edge(edge_mode, edge_mode, 64);
  CHECK(oe == doctest::Approx(pi * coth(pi)).epsilon(0.05));
}
