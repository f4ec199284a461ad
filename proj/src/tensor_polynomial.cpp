// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/tensor_polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace hpbem {

namespace {

void check_edge(int edge)
{
  if (edge < 1 || edge > 4) throw std::invalid_argument("edge id must be in 1..4");
}

} // namespace

Eigen::Vector2d edge_point(int edge, double sigma)
{
  check_edge(edge);
  switch (edge) {
    case 1: return {sigma, 0.0};
    case 2: return {1.0, sigma};
    case 3: return {1.0 - sigma, 1.0};
    default: return {0.0, 1.0 - sigma};
  }
}

Eigen::Vector2d edge_normal(int edge)
{
  check_edge(edge);
  switch (edge) {
    case 1: return {0.0, -1.0};
    case 2: return {1.0, 0.0};
    case 3: return {0.0, 1.0};
    default: return {-1.0, 0.0};
  }
}

Eigen::Vector2d corner_point(int corner)
{
  switch (corner & 3) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {1.0, 1.0};
    default: return {0.0, 1.0};
  }
}

int edge_start_corner(int edge)
{
  check_edge(edge);
  return edge - 1;
}

int edge_end_corner(int edge)
{
  check_edge(edge);
  return edge % 4;
}

TensorPolynomial::TensorPolynomial(int degree_1, int degree_2)
{
  if (degree_1 < 0 || degree_2 < 0)
    throw std::invalid_argument("TensorPolynomial: negative degree");
  m_coeff = Eigen::MatrixXd::Zero(degree_1 + 1, degree_2 + 1);
}

TensorPolynomial::TensorPolynomial(Eigen::MatrixXd coeff) : m_coeff(std::move(coeff))
{
  if (m_coeff.rows() < 1 || m_coeff.cols() < 1)
    throw std::invalid_argument("TensorPolynomial: empty coefficient matrix");
}

double TensorPolynomial::operator()(double x1, double x2) const
{
  const Eigen::VectorXd v1 = legendre_values(degree_1(), x1);
  const Eigen::VectorXd v2 = legendre_values(degree_2(), x2);
  return v1.dot(m_coeff * v2);
}

Eigen::MatrixXd TensorPolynomial::values(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) const
{
  const Eigen::MatrixXd v1 = legendre_values(degree_1(), x1);
  const Eigen::MatrixXd v2 = legendre_values(degree_2(), x2);
  return v1 * m_coeff * v2.transpose();
}

TensorPolynomial TensorPolynomial::derivative_1() const
{
  if (degree_1() == 0) return TensorPolynomial(0, degree_2());
  return TensorPolynomial(legendre_derivative_matrix(degree_1()) * m_coeff);
}

TensorPolynomial TensorPolynomial::derivative_2() const
{
  if (degree_2() == 0) return TensorPolynomial(degree_1(), 0);
  return TensorPolynomial(m_coeff * legendre_derivative_matrix(degree_2()).transpose());
}

Eigen::VectorXd TensorPolynomial::restrict_1(double at) const
{
  return m_coeff.transpose() * legendre_values(degree_1(), at);
}

Eigen::VectorXd TensorPolynomial::restrict_2(double at) const
{
  return m_coeff * legendre_values(degree_2(), at);
}

TensorPolynomial TensorPolynomial::embedded(int degree_1_new, int degree_2_new) const
{
  if (degree_1_new < degree_1() || degree_2_new < degree_2())
    throw std::invalid_argument("TensorPolynomial::embedded: target degrees too small");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(degree_1_new + 1, degree_2_new + 1);
  c.topLeftCorner(m_coeff.rows(), m_coeff.cols()) = m_coeff;
  return TensorPolynomial(std::move(c));
}

TensorPolynomial operator+(const TensorPolynomial& a, const TensorPolynomial& b)
{
  const int d1 = std::max(a.degree_1(), b.degree_1());
  const int d2 = std::max(a.degree_2(), b.degree_2());
  return TensorPolynomial(a.embedded(d1, d2).coeff() + b.embedded(d1, d2).coeff());
}

TensorPolynomial operator-(const TensorPolynomial& a, const TensorPolynomial& b)
{
  return a + (-b);
}

TensorPolynomial operator*(double a, const TensorPolynomial& f)
{
  return TensorPolynomial(a * f.coeff());
}

double l2_inner(const TensorPolynomial& a, const TensorPolynomial& b)
{
  const int r = std::min(a.coeff().rows(), b.coeff().rows());
  const int c = std::min(a.coeff().cols(), b.coeff().cols());
  return a.coeff().topLeftCorner(r, c).cwiseProduct(b.coeff().topLeftCorner(r, c)).sum();
}

Eigen::VectorXd reflect_coefficients(Eigen::VectorXd c)
{
  for (Eigen::Index k = 1; k < c.size(); k += 2) c(k) = -c(k);
  return c;
}

TensorPolynomial edge_blend_extension(int edge, const Eigen::VectorXd& q_sigma,
                                      const Eigen::VectorXd& blend_t, int p)
{
  check_edge(edge);
  if (q_sigma.size() > p + 1 || blend_t.size() > p + 1)
    throw std::invalid_argument("edge_blend_extension: factor degree exceeds p");
  Eigen::VectorXd q = Eigen::VectorXd::Zero(p + 1);
  q.head(q_sigma.size()) = q_sigma;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
  b.head(blend_t.size()) = blend_t;

  TensorPolynomial e(p, p);
  switch (edge) {
    case 1: e.coeff() = q * b.transpose(); break; // sigma = x1, t = x2
    case 2: e.coeff() = reflect_coefficients(b) * q.transpose(); break;
    case 3: e.coeff() = reflect_coefficients(q) * reflect_coefficients(b).transpose(); break;
    default: e.coeff() = b * reflect_coefficients(q).transpose(); break;
  }
  return e;
}

EdgePolynomial::EdgePolynomial(int edge, Eigen::VectorXd coeff)
    : m_edge(edge), m_coeff(std::move(coeff))
{
  check_edge(edge);
  if (m_coeff.size() < 1) throw std::invalid_argument("EdgePolynomial: empty coefficients");
}

double EdgePolynomial::operator()(double sigma) const
{
  return legendre_values(degree(), sigma).dot(m_coeff);
}

double EdgePolynomial::value_at_zero() const
{
  return legendre_values_at_zero(degree()).dot(m_coeff);
}

double EdgePolynomial::value_at_one() const
{
  return legendre_values_at_one(degree()).dot(m_coeff);
}

bool EdgePolynomial::is_bubble(double tol) const
{
  const double scale = 1.0 + m_coeff.norm();
  return std::abs(value_at_zero()) <= tol * scale && std::abs(value_at_one()) <= tol * scale;
}

} // namespace hpbem
