// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hpbem/fields.hpp"
#include "hpbem/fracform.hpp"
#include "hpbem/interp.hpp"
#include "hpbem/quadrature.hpp"
#include "hpbem/rt_function.hpp"

using namespace hpbem;

namespace {

// Independent Gram of a family by quadrature (no coefficient shortcuts).
Eigen::MatrixXd quadrature_gram(const std::vector<RTFunction>& family, int points)
{
  const QuadratureRule rule = gauss_legendre(points);
  const int n = static_cast<int>(family.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < rule.size(); ++a)
    for (int b = 0; b < rule.size(); ++b) {
      const double w = rule.weights(a) * rule.weights(b);
      Eigen::MatrixXd vals(n, 2);
      for (int i = 0; i < n; ++i)
        vals.row(i) = family[i](rule.points(a), rule.points(b)).transpose();
      gram += w * vals * vals.transpose();
    }
  return gram;
}

int gram_rank(const Eigen::MatrixXd& gram)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double tol = 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff());
  return static_cast<int>((es.eigenvalues().array() > tol).count());
}

TensorPolynomial monomial_x1()
{
  TensorPolynomial f(1, 0);
  f.coeff().col(0) = monomial_x_coefficients(1);
  return f;
}

} // namespace

TEST_CASE("gauss rules integrate to declared exactness")
{
  for (int n : {1, 2, 5, 12, 40}) {
    const QuadratureRule rule = gauss_legendre(n);
    CHECK(rule.exactness == 2 * n - 1);
    for (int d = 0; d <= rule.exactness; ++d) {
      double sum = 0.0;
      for (int i = 0; i < rule.size(); ++i) sum += rule.weights(i) * std::pow(rule.points(i), d);
      CHECK(std::abs(sum - 1.0 / (d + 1)) <= 1e-13 / (d + 1) + 1e-15);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("tensor polynomials evaluate and differentiate exactly")
{
  const TensorPolynomial x1 = monomial_x1();
  CHECK(x1.coeff().size() == 2);
  CHECK(x1(0.3, 0.9) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(x1.derivative_1()(0.25, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x1.derivative_2().l2_norm() == doctest::Approx(0.0));
  CHECK(x1.mean() == doctest::Approx(0.5).epsilon(1e-14));

  // degree-7 evaluation against direct powers, exact to rounding
  const TensorPolynomial f = proj_L2(
      [](double a, double b) { return std::pow(a, 7) - 3.0 * a * b * b; }, 7);
  for (double a : {0.0, 0.31, 1.0})
    for (double b : {0.0, 0.62, 1.0})
      CHECK(f(a, b) == doctest::Approx(std::pow(a, 7) - 3.0 * a * b * b).epsilon(1e-12));
}

TEST_CASE("edge polynomials: bubbles vanish at endpoints")
{
  const Eigen::MatrixXd bub = bubble_basis_coefficients(5);
  for (int j = 0; j < bub.cols(); ++j) {
    const EdgePolynomial e(1, bub.col(j));
    CHECK(e.is_bubble());
  }
  Eigen::VectorXd c(2);
  c << 1.0, 0.5;
  CHECK_FALSE(EdgePolynomial(2, c).is_bubble());
}

TEST_CASE("rt_basis dimension and independence (Gram rank oracle)")
{
  CHECK_THROWS_AS(rt_basis(0), std::invalid_argument);
  for (int p = 1; p <= 8; ++p) {
    const auto basis = rt_basis(p);
    CHECK(static_cast<int>(basis.size()) == 2 * p * (p + 1));
    CHECK(gram_rank(quadrature_gram(basis, p + 3)) == 2 * p * (p + 1));
  }
}

TEST_CASE("lowest-order edge basis spans constants on each edge")
{
  const auto basis = rt_edge_basis(1);
  for (int i = 0; i < 4; ++i)
    for (int edge = 1; edge <= 4; ++edge) {
      const EdgePolynomial tr = basis[i].normal_trace(edge);
      CHECK(tr.degree() == 0);
      CHECK(tr.coeff()(0) == doctest::Approx(edge == i + 1 ? 1.0 : 0.0).epsilon(1e-14));
    }
}

TEST_CASE("rt_bubble_basis: dimension and vanishing normal traces")
{
  CHECK(rt_bubble_basis(1).empty());
  for (int p = 1; p <= 8; ++p) {
    const auto bubbles = rt_bubble_basis(p);
    CHECK(static_cast<int>(bubbles.size()) == 2 * p * (p - 1));
    if (!bubbles.empty())
      CHECK(gram_rank(quadrature_gram(bubbles, p + 3)) == 2 * p * (p - 1));
    const QuadratureRule rule = gauss_legendre(p + 5);
    for (const auto& v : bubbles)
      for (int edge = 1; edge <= 4; ++edge) {
        const Eigen::Vector2d n = edge_normal(edge);
        for (int q = 0; q < rule.size(); ++q) {
          const Eigen::Vector2d x = edge_point(edge, rule.points(q));
          CHECK(std::abs(v(x(0), x(1)).dot(n)) <= 1e-12);
        }
      }
  }
}

TEST_CASE("divergence: explicit examples")
{
  // v = (x1, 0) -> div = 1
  const RTFunction v(monomial_x1(), TensorPolynomial(0, 1));
  CHECK(v.divergence()(0.2, 0.7) == doctest::Approx(1.0).epsilon(1e-14));

  // v = (x1^2, 0) in RT_2 -> div = 2 x1
  const TensorPolynomial x1sq =
      proj_L2([](double a, double) { return a * a; }, 2); // exact for polynomials
  Eigen::MatrixXd c = x1sq.coeff().leftCols(2);
  const RTFunction v2(TensorPolynomial(c), TensorPolynomial(1, 2));
  for (double x : {0.1, 0.6})
    CHECK(v2.divergence()(x, 0.4) == doctest::Approx(2.0 * x).epsilon(1e-13));

  // bubbles have mean-zero divergence (divergence theorem)
  for (const auto& b : rt_bubble_basis(3)) CHECK(std::abs(b.divergence().mean()) <= 1e-13);
}

TEST_CASE("scalar_curl: examples and exact identities")
{
  // phi = x1 x2 -> curl = (x1, -x2)
  TensorPolynomial phi(1, 1);
  phi.coeff() = monomial_x_coefficients(1) * monomial_x_coefficients(1).transpose();
  const RTFunction c = scalar_curl(phi);
  for (double x : {0.2, 0.8})
    for (double y : {0.1, 0.9}) {
      CHECK(c(x, y)(0) == doctest::Approx(x).epsilon(1e-14));
      CHECK(c(x, y)(1) == doctest::Approx(-y).epsilon(1e-14));
    }
  CHECK(c.divergence().l2_norm() <= 1e-14);

  // constants map to zero fields
  TensorPolynomial one(1, 1);
  one.coeff()(0, 0) = 3.0;
  CHECK(scalar_curl(one).l2_norm() <= 1e-15);

  // curl of scalar bubbles: zero divergence and zero normal trace
  for (int p = 2; p <= 6; ++p)
    for (const auto& phi0 : scalar_bubble_basis(p)) {
      const RTFunction w = scalar_curl(phi0);
      CHECK(w.divergence().l2_norm() <= 1e-13);
      for (int edge = 1; edge <= 4; ++edge)
        CHECK(w.normal_trace(edge).coeff().norm() <= 1e-13);
    }
}

TEST_CASE("normal traces of (x1, 0)")
{
  const RTFunction v(monomial_x1(), TensorPolynomial(0, 1));
  CHECK(v.normal_trace(2)(0.3) == doctest::Approx(1.0).epsilon(1e-14)); // x1 = 1
  CHECK(v.normal_trace(1)(0.4) == doctest::Approx(0.0).epsilon(1e-14)); // x2 = 0
  CHECK(v.normal_trace(4)(0.6) == doctest::Approx(0.0).epsilon(1e-14)); // x1 = 0
  CHECK(v.flux(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(v.normal_trace(5), std::invalid_argument);
}

TEST_CASE("divergence maps RT_p onto P_{p-1}: rank p^2")
{
  for (int p = 1; p <= 6; ++p) {
    const auto basis = rt_basis(p);
    Eigen::MatrixXd divs(p * p, basis.size());
    for (size_t i = 0; i < basis.size(); ++i) {
      const TensorPolynomial d = basis[i].divergence();
      divs.col(i) = Eigen::Map<const Eigen::VectorXd>(d.coeff().data(), p * p);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(divs);
    svd.setThreshold(1e-10);
    CHECK(static_cast<int>(svd.rank()) == p * p);
  }
}

TEST_CASE("curl of scalar bubbles lies in the vector bubble space")
{
  for (int p = 2; p <= 5; ++p) {
    const auto bubbles = rt_bubble_basis(p);
    Eigen::MatrixXd q(rt_dimension(p), bubbles.size());
    for (size_t i = 0; i < bubbles.size(); ++i) q.col(i) = rt_coefficients(bubbles[i]);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(q);
    for (const auto& phi : scalar_bubble_basis(p)) {
      const Eigen::VectorXd w = rt_coefficients(scalar_curl(phi));
      const Eigen::VectorXd sol = qr.solve(w);
      CHECK((q * sol - w).norm() <= 1e-11 * (1.0 + w.norm()));
    }
  }
}

TEST_CASE("inverse inequality trend: L2 over tilde H^{-1/2} grows at most like p")
{
  Rng rng(991);
  std::vector<StabilityRow> rows; // reuse the log-log slope fitter
  for (int p = 2; p <= 10; ++p) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd c(p + 1, p + 1);
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= p; ++j) c(i, j) = rng.uniform(-1.0, 1.0);
      const TensorPolynomial v{c};
      const ModeSpectrum s = expand(v, ModeKind::cosine, 64);
      worst = std::max(worst, v.l2_norm() / norm_tildeHm12_K(s));
    }
    rows.push_back({p, worst, 0.0, worst});
  }
  const double slope = fit_loglog_slope(rows);
  CHECK(slope <= 1.3);
  CHECK(slope >= 0.2); // the ratio does grow: guards against a broken norm
}
