// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "hpbem/fields.hpp"
#include "hpbem/interp.hpp"
#include "hpbem/quadrature.hpp"

using namespace hpbem;

namespace {

constexpr double pi = 3.14159265358979323846;

TensorPolynomial random_polynomial(Rng& rng, int d1, int d2)
{
  Eigen::MatrixXd c(d1 + 1, d2 + 1);
  for (int i = 0; i <= d1; ++i)
    for (int j = 0; j <= d2; ++j) c(i, j) = rng.uniform(-1.0, 1.0);
  return TensorPolynomial(c);
}

RTFunction random_rt(Rng& rng, int p)
{
  Eigen::VectorXd c(rt_dimension(p));
  for (int i = 0; i < c.size(); ++i) c(i) = rng.uniform(-1.0, 1.0);
  return rt_from_coefficients(p, c);
}

double l2_error(const std::function<double(double, double)>& f, const TensorPolynomial& g,
                int points = 40)
{
  const QuadratureRule rule = gauss_legendre(points);
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j) {
      const double d = f(rule.points(i), rule.points(j)) - g(rule.points(i), rule.points(j));
      sum += rule.weights(i) * rule.weights(j) * d * d;
    }
  return std::sqrt(sum);
}

} // namespace

TEST_CASE("proj_L2: idempotency and the hand-solved 1D normal equations")
{
  Rng rng(17);
  for (int p = 1; p <= 6; ++p) {
    const TensorPolynomial f = random_polynomial(rng, p, p);
    CHECK((proj_L2(f, p) - f).l2_norm() <= 1e-13 * (1.0 + f.l2_norm()));
  }

  // f = x1^2 onto P_1: solve the 2x2 normal equations independently.
  // Basis {1, x}: G = [[1, 1/2], [1/2, 1/3]], rhs = (1/3, 1/4).
  Eigen::Matrix2d g;
  g << 1.0, 0.5, 0.5, 1.0 / 3.0;
  const Eigen::Vector2d rhs(1.0 / 3.0, 0.25);
  const Eigen::Vector2d c = g.inverse() * rhs; // coefficients in {1, x}
  const TensorPolynomial pr = proj_L2([](double a, double) { return a * a; }, 1);
  for (double x : {0.0, 0.4, 1.0})
    CHECK(pr(x, 0.7) == doctest::Approx(c(0) + c(1) * x).epsilon(1e-12));

  // residual orthogonality against P_1
  const QuadratureRule rule = gauss_legendre(10);
  for (auto test : {std::function<double(double, double)>([](double, double) { return 1.0; }),
                    std::function<double(double, double)>([](double a, double) { return a; }),
                    std::function<double(double, double)>([](double, double b) { return b; })}) {
    double defect = 0.0;
    for (int i = 0; i < rule.size(); ++i)
      for (int j = 0; j < rule.size(); ++j) {
        const double a = rule.points(i), b = rule.points(j);
        defect += rule.weights(i) * rule.weights(j) * (a * a - pr(a, b)) * test(a, b);
      }
    CHECK(std::abs(defect) <= 1e-13);
  }

  // spectral decay example: the brute-force residual of sin(pi x) at p = 5 is
  // 3.690e-4 (the first neglected orthonormal coefficient)
  const TensorPolynomial s5 = proj_L2([](double a, double) { return std::sin(pi * a); }, 5);
  CHECK(l2_error([](double a, double) { return std::sin(pi * a); }, s5) ==
        doctest::Approx(3.690e-4).epsilon(1e-2));
}

TEST_CASE("proj_tildeHm12: idempotency, mean preservation, orthogonality defect")
{
  Rng rng(23);
  for (int p = 1; p <= 5; ++p) {
    const TensorPolynomial f = random_polynomial(rng, p, p);
    CHECK((proj_tildeHm12(f, p) - f).l2_norm() <= 1e-12 * (1.0 + f.l2_norm()));
  }

  // mean preservation for arbitrary data (consequence of the w00 = 1 mode)
  auto f = [](double a, double b) { return std::sin(2.1 * a + 0.3) * std::cos(1.7 * b); };
  const int p = 3;
  const TensorPolynomial pf = proj_tildeHm12(f, p, 64);
  const QuadratureRule rule = gauss_legendre(80);
  double mean_f = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j)
      mean_f += rule.weights(i) * rule.weights(j) * f(rule.points(i), rule.points(j));
  CHECK(pf.mean() == doctest::Approx(mean_f).epsilon(1e-9));

  // f = x1^3 onto P_2: residual tilde H^{-1/2}-orthogonal to every basis member
  TensorPolynomial x1(1, 0);
  x1.coeff().col(0) = monomial_x_coefficients(1);
  const TensorPolynomial x13 = proj_L2([](double a, double) { return a * a * a; }, 3);
  const TensorPolynomial pr = proj_tildeHm12(x13, 2, 64);
  const ModeSpectrum rs = expand(x13 - pr.embedded(3, 3), ModeKind::cosine, 64);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) {
      TensorPolynomial basis(2, 2);
      basis.coeff()(i, j) = 1.0;
      const ModeSpectrum bs = expand(basis, ModeKind::cosine, 64);
      CHECK(std::abs(ip_tildeHm12_K(rs, bs)) <= 1e-9);
    }
}

TEST_CASE("interp_H1: vertex matching and idempotency")
{
  Rng rng(29);
  for (int p = 1; p <= 6; ++p) {
    const TensorPolynomial f = random_polynomial(rng, p, p);
    auto fe = [&f](double a, double b) { return f(a, b); };
    const TensorPolynomial g = interp_H1(fe, p);
    CHECK((g - f).l2_norm() <= 1e-10 * (1.0 + f.l2_norm()));
  }

  // bilinear reproduction at p = 1
  auto bil = [](double a, double b) { return 1.0 + 2.0 * a - b + 0.5 * a * b; };
  const TensorPolynomial g1 = interp_H1(bil, 1);
  for (double a : {0.0, 0.3, 1.0})
    for (double b : {0.0, 0.8, 1.0}) CHECK(g1(a, b) == doctest::Approx(bil(a, b)).epsilon(1e-12));

  // vertex interpolation for a transcendental function
  auto f = [](double a, double b) { return std::cos(1.3 * a) * std::exp(0.4 * b); };
  const TensorPolynomial g = interp_H1(f, 4);
  for (int c = 0; c < 4; ++c) {
    const Eigen::Vector2d x = corner_point(c);
    CHECK(g(x(0), x(1)) == doctest::Approx(f(x(0), x(1))).epsilon(1e-10));
  }
}

TEST_CASE("interp_div_m12: reproduces RT_p exactly (coefficients to 1e-10)")
{
  Rng rng(31);
  for (int p = 1; p <= 6; ++p) {
    const RTFunction v = random_rt(rng, p);
    const InterpolantBreakdown b = interp_div_m12(vector_field(v), p);
    const double err = (rt_coefficients(b.total) - rt_coefficients(v)).norm();
    CHECK(err <= 1e-10 * (1.0 + rt_coefficients(v).norm()));
    // breakdown invariant: total = u1 + u2p + u3p, coefficient-wise
    const double split_err =
        (rt_coefficients(b.total) -
         (rt_coefficients(b.u1) + rt_coefficients(b.u2p) + rt_coefficients(b.u3p))).norm();
    CHECK(split_err <= 1e-13 * (1.0 + rt_coefficients(v).norm()));
    // u3p is a bubble; u2p is divergence-free
    for (int edge = 1; edge <= 4; ++edge)
      CHECK(b.u3p.normal_trace(edge).coeff().norm() <= 1e-10);
    CHECK(b.u2p.divergence().l2_norm() <= 1e-11);
  }
}

TEST_CASE("interp_div_m12: lowest-order behavior on (x1, 0)")
{
  TensorPolynomial c1(1, 0);
  c1.coeff().col(0) = monomial_x_coefficients(1);
  const RTFunction u(c1, TensorPolynomial(0, 1));
  const InterpolantBreakdown b = interp_div_m12(vector_field(u), 1);
  CHECK((rt_coefficients(b.u1) - rt_coefficients(u)).norm() <= 1e-12);
  CHECK(b.u2p.l2_norm() <= 1e-12);
  CHECK(b.u3p.l2_norm() <= 1e-12);
}

TEST_CASE("boundary primitive: fluxes of u - u1 vanish and psi is edge-bubble")
{
  Rng rng(37);
  const VectorField u = random_smooth_field(rng);
  const int p = 3;
  const InterpolantBreakdown b = interp_div_m12(u, p);
  const BoundaryPrimitive bp = boundary_primitive(u, b.u1, 64);
  for (int e = 0; e < 4; ++e) {
    CHECK(bp.vertex_defect[e] <= 1e-10);
    // psi evaluates to ~0 at both endpoints (vertex condition)
    CHECK(std::abs(bp.psi[e](1.0)) <= 1e-10);
    CHECK(std::abs(bp.psi[e](0.0)) <= 1e-15);
  }
}

TEST_CASE("commuting diagrams on explicit fields")
{
  // curl field: divergence of the L2 interpolant vanishes
  {
    // phi = x1 x2 (1-x1)(1-x2) via exact projection
    const TensorPolynomial phi =
        proj_L2([](double a, double b) { return a * b * (1 - a) * (1 - b); }, 3);
    const RTFunction cu = scalar_curl(phi);
    const InterpolantBreakdown b = interp_div_l2(vector_field(cu), 3);
    CHECK(b.total.divergence().l2_norm() <= 1e-11);
  }

  // u = (x1^3, 0), p = 2: div of the interpolant equals proj_L2(3 x1^2, 1)
  {
    const TensorPolynomial x13 = proj_L2([](double a, double) { return a * a * a; }, 3);
    Eigen::MatrixXd cc = x13.coeff().leftCols(3); // (x1^3, 0) as a member of RT_3
    const RTFunction u(TensorPolynomial(cc), TensorPolynomial(2, 3));
    const InterpolantBreakdown b = interp_div_l2(vector_field(u), 2);
    const TensorPolynomial lhs = b.total.divergence();
    const TensorPolynomial rhs = proj_L2([](double a, double) { return 3.0 * a * a; }, 1);
    CHECK((lhs - rhs).l2_norm() <= 1e-11);
  }

  // smooth field, p = 4: div of the -1/2 interpolant is the -1/2 projection
  {
    VectorField u;
    u.value = [](double a, double b) {
      return Eigen::Vector2d(std::sin(pi * a) * std::sin(pi * b), 0.0);
    };
    u.divergence = [](double a, double b) { return pi * std::cos(pi * a) * std::sin(pi * b); };
    const InterpolantBreakdown b = interp_div_m12(u, 4);
    const TensorPolynomial rhs = proj_tildeHm12(u.divergence, 3, 64);
    CHECK((b.total.divergence() - rhs).l2_norm() <= 1e-8);
  }
}

TEST_CASE("discrete curl-freeness of the interpolation defect")
{
  Rng rng(41);
  const VectorField u = random_smooth_field(rng);
  for (int p : {2, 4}) {
    const InterpolantBreakdown b = interp_div_m12(u, p);
    const QuadratureRule rule = gauss_legendre(40);
    for (const auto& phi : scalar_bubble_basis(p)) {
      const RTFunction cphi = scalar_curl(phi);
      double defect = 0.0;
      for (int i = 0; i < rule.size(); ++i)
        for (int j = 0; j < rule.size(); ++j) {
          const double a = rule.points(i), bb = rule.points(j);
          defect += rule.weights(i) * rule.weights(j) *
                    (b.total(a, bb) - u.value(a, bb)).dot(cphi(a, bb));
        }
      CHECK(std::abs(defect) <= 1e-10);
    }
  }
}

TEST_CASE("extension independence: linear vs quadratic blend")
{
  Rng rng(43);
  const VectorField u = random_smooth_field(rng);
  for (int p : {2, 3, 5}) {
    const InterpolantBreakdown lin = interp_div_m12(u, p, 64, ExtensionBlend::linear);
    const InterpolantBreakdown quad = interp_div_m12(u, p, 64, ExtensionBlend::quadratic);
    const double diff = (rt_coefficients(lin.total) - rt_coefficients(quad.total)).norm();
    CHECK(diff <= 1e-9 * (1.0 + rt_coefficients(lin.total).norm()));
    // the split itself differs (u2p changes), only the sum is invariant
    if (p >= 2) CHECK((rt_coefficients(lin.u2p) - rt_coefficients(quad.u2p)).norm() > 1e-8);
  }
}

TEST_CASE("infsup_constant matches the closed form for p = 2..10")
{
  CHECK_THROWS_AS(infsup_constant(0), std::invalid_argument);
  const InfSupReport r1 = infsup_constant(1);
  CHECK(r1.trivial_space);
  for (int p = 2; p <= 10; ++p) {
    const InfSupReport r = infsup_constant(p);
    CHECK_FALSE(r.trivial_space);
    CHECK(r.dim_A == 2 * p * (p - 1));
    CHECK(r.dim_B == 2 * p * (p - 1));
    CHECK(r.computed > 0.0);
    CHECK(r.computed <= 1.0);
    CHECK(std::abs(r.computed - r.closed_form) <= 1e-8);
  }
  CHECK(infsup_closed_form(2) == doctest::Approx(0.91287093).epsilon(1e-7));
  CHECK(infsup_closed_form(3) == doctest::Approx(0.83666003).epsilon(1e-7));
  CHECK(infsup_closed_form(4) == doctest::Approx(0.77459667).epsilon(1e-7));
}

TEST_CASE("L2 quasi-stability on curl-free bubble fields")
{
  // u = grad(cos(pi x1) cos(pi x2)) is curl-free with zero normal trace.
  VectorField u;
  u.value = [](double a, double b) {
    return Eigen::Vector2d(-pi * std::sin(pi * a) * std::cos(pi * b),
                           -pi * std::cos(pi * a) * std::sin(pi * b));
  };
  u.divergence = [](double a, double b) {
    return -2.0 * pi * pi * std::cos(pi * a) * std::cos(pi * b);
  };
  const QuadratureRule rule = gauss_legendre(40);
  for (int p : {2, 3, 4, 5}) {
    const InterpolantBreakdown b = interp_div_l2(u, p);
    double err2 = 0.0;
    for (int i = 0; i < rule.size(); ++i)
      for (int j = 0; j < rule.size(); ++j)
        err2 += rule.weights(i) * rule.weights(j) *
                (u.value(rule.points(i), rule.points(j)) -
                 b.total(rule.points(i), rule.points(j))).squaredNorm();
    // best L^2 approximation from the bubble space by direct least squares
    const auto bubbles = rt_bubble_basis(p);
    const int nb = static_cast<int>(bubbles.size());
    Eigen::MatrixXd gram(nb, nb);
    Eigen::VectorXd rhs(nb);
    for (int i = 0; i < nb; ++i) {
      rhs(i) = 0.0;
      for (int a = 0; a < rule.size(); ++a)
        for (int c = 0; c < rule.size(); ++c)
          rhs(i) += rule.weights(a) * rule.weights(c) *
                    u.value(rule.points(a), rule.points(c))
                        .dot(bubbles[i](rule.points(a), rule.points(c)));
      for (int j = 0; j < nb; ++j) gram(i, j) = l2_inner(bubbles[i], bubbles[j]);
    }
    const Eigen::VectorXd coef = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);
    RTFunction best(p);
    for (int i = 0; i < nb; ++i) best = best + coef(i) * bubbles[i];
    double best2 = 0.0;
    for (int i = 0; i < rule.size(); ++i)
      for (int j = 0; j < rule.size(); ++j)
        best2 += rule.weights(i) * rule.weights(j) *
                 (u.value(rule.points(i), rule.points(j)) -
                  best(rule.points(i), rule.points(j))).squaredNorm();
    CHECK(std::sqrt(err2) <= 5.0 * std::sqrt(double(p)) * std::sqrt(best2) + 1e-12);
  }
}

TEST_CASE("stability_scan: polynomial fields give flat tables, smooth fields stay bounded")
{
  Rng rng(47);
  const RTFunction v = random_rt(rng, 2);
  const auto rows = stability_scan(vector_field(v), 2, 8);
  for (const auto& r : rows)
    CHECK(r.total == doctest::Approx(rows.front().total).epsilon(1e-8));

  const auto srows = stability_scan(smooth_field(), 2, 8);
  const double slope = fit_loglog_slope(srows);
  CHECK(std::abs(slope) <= 0.1); // converging norms, no growth
}

TEST_CASE("stability_scan: corner-singularity family has slope well below 0.3")
{
  const auto rows = stability_scan(corner_singular_field(1e-3), 2, 10);
  const double slope = fit_loglog_slope(rows);
  CHECK(slope <= 0.3);
}

TEST_CASE("interior system degeneracy guard")
{
  VectorField bad;
  bad.value = nullptr;
  bad.divergence = nullptr;
  CHECK_THROWS_AS(interp_div_m12(bad, 2), std::invalid_argument);
  CHECK_THROWS_AS(interp_div_m12(smooth_field(), 0), std::invalid_argument);
}
