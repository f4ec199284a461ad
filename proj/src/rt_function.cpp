// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/rt_function.hpp"

#include <cmath>
#include <stdexcept>

namespace hpbem {

namespace {

Eigen::VectorXd reverse_parity(Eigen::VectorXd c)
{
  // q(1-sigma) has coefficients (-1)^k c_k.
  for (Eigen::Index k = 1; k < c.size(); k += 2) c(k) = -c(k);
  return c;
}

} // namespace

RTFunction::RTFunction(int order)
    : m_order(order), m_c1(order, order - 1), m_c2(order - 1, order)
{
  if (order < 1) throw std::invalid_argument("RTFunction: order must be >= 1");
}

RTFunction::RTFunction(TensorPolynomial component_1, TensorPolynomial component_2)
    : m_c1(std::move(component_1)), m_c2(std::move(component_2))
{
  m_order = m_c1.degree_1();
  if (m_order < 1 || m_c1.degree_2() != m_order - 1 || m_c2.degree_1() != m_order - 1 ||
      m_c2.degree_2() != m_order)
    throw std::invalid_argument("RTFunction: components must have degrees (p,p-1) x (p-1,p)");
}

Eigen::Vector2d RTFunction::operator()(double x1, double x2) const
{
  return {m_c1(x1, x2), m_c2(x1, x2)};
}

TensorPolynomial RTFunction::divergence() const
{
  return m_c1.derivative_1() + m_c2.derivative_2();
}

EdgePolynomial RTFunction::normal_trace(int edge) const
{
  switch (edge) {
    case 1: return EdgePolynomial(1, -m_c2.restrict_2(0.0));
    case 2: return EdgePolynomial(2, m_c1.restrict_1(1.0));
    case 3: return EdgePolynomial(3, reverse_parity(m_c2.restrict_2(1.0)));
    case 4: return EdgePolynomial(4, reverse_parity(-m_c1.restrict_1(0.0)));
    default: throw std::invalid_argument("normal_trace: edge id must be in 1..4");
  }
}

double RTFunction::l2_norm() const
{
  return std::sqrt(l2_inner(*this, *this));
}

RTFunction RTFunction::embedded(int p_new) const
{
  if (p_new < m_order) throw std::invalid_argument("RTFunction::embedded: target order too small");
  return RTFunction(m_c1.embedded(p_new, p_new - 1), m_c2.embedded(p_new - 1, p_new));
}

RTFunction operator+(const RTFunction& a, const RTFunction& b)
{
  const int p = std::max(a.order(), b.order());
  const RTFunction ap = a.embedded(p), bp = b.embedded(p);
  return RTFunction(ap.component_1() + bp.component_1(), ap.component_2() + bp.component_2());
}

RTFunction operator-(const RTFunction& a, const RTFunction& b)
{
  return a + (-b);
}

RTFunction operator*(double a, const RTFunction& v)
{
  return RTFunction(a * v.component_1(), a * v.component_2());
}

double l2_inner(const RTFunction& a, const RTFunction& b)
{
  return l2_inner(a.component_1(), b.component_1()) + l2_inner(a.component_2(), b.component_2());
}

RTFunction scalar_curl(const TensorPolynomial& phi)
{
  if (phi.degree_1() != phi.degree_2())
    throw std::invalid_argument("scalar_curl: expects degrees (p,p)");
  const int p = phi.degree_1();
  if (p < 1) return RTFunction(1);
  return RTFunction(phi.derivative_2().embedded(p, p - 1), (-phi.derivative_1()).embedded(p - 1, p));
}

int rt_dimension(int p) { return 2 * p * (p + 1); }
int rt_bubble_dimension(int p) { return 2 * p * (p - 1); }

Eigen::VectorXd rt_coefficients(const RTFunction& v)
{
  const int p = v.order();
  Eigen::VectorXd c(rt_dimension(p));
  const auto& c1 = v.component_1().coeff();
  const auto& c2 = v.component_2().coeff();
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < c1.rows(); ++i)
    for (Eigen::Index j = 0; j < c1.cols(); ++j) c(idx++) = c1(i, j);
  for (Eigen::Index i = 0; i < c2.rows(); ++i)
    for (Eigen::Index j = 0; j < c2.cols(); ++j) c(idx++) = c2(i, j);
  return c;
}

RTFunction rt_from_coefficients(int p, const Eigen::VectorXd& c)
{
  if (c.size() != rt_dimension(p))
    throw std::invalid_argument("rt_from_coefficients: size mismatch");
  Eigen::MatrixXd c1(p + 1, p), c2(p, p + 1);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < c1.rows(); ++i)
    for (Eigen::Index j = 0; j < c1.cols(); ++j) c1(i, j) = c(idx++);
  for (Eigen::Index i = 0; i < c2.rows(); ++i)
    for (Eigen::Index j = 0; j < c2.cols(); ++j) c2(i, j) = c(idx++);
  return RTFunction(TensorPolynomial(std::move(c1)), TensorPolynomial(std::move(c2)));
}

std::vector<RTFunction> rt_basis(int p)
{
  if (p < 1) throw std::invalid_argument("rt_basis: p must be >= 1");
  std::vector<RTFunction> basis;
  basis.reserve(rt_dimension(p));
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p - 1; ++j) {
      TensorPolynomial c1(p, p - 1);
      c1.coeff()(i, j) = 1.0;
      basis.emplace_back(std::move(c1), TensorPolynomial(p - 1, p));
    }
  for (int i = 0; i <= p - 1; ++i)
    for (int j = 0; j <= p; ++j) {
      TensorPolynomial c2(p - 1, p);
      c2.coeff()(i, j) = 1.0;
      basis.emplace_back(TensorPolynomial(p, p - 1), std::move(c2));
    }
  return basis;
}

std::vector<RTFunction> rt_bubble_basis(int p)
{
  if (p < 1) throw std::invalid_argument("rt_bubble_basis: p must be >= 1");
  std::vector<RTFunction> basis;
  basis.reserve(rt_bubble_dimension(p));
  const Eigen::MatrixXd bubbles = bubble_basis_coefficients(p); // (p+1) x (p-1)
  // First components b_i(x1) Pt_j(x2): vanish where the normal trace lives.
  for (int i = 0; i < p - 1; ++i)
    for (int j = 0; j <= p - 1; ++j) {
      TensorPolynomial c1(p, p - 1);
      c1.coeff().col(j) = bubbles.col(i);
      basis.emplace_back(std::move(c1), TensorPolynomial(p - 1, p));
    }
  for (int i = 0; i <= p - 1; ++i)
    for (int j = 0; j < p - 1; ++j) {
      TensorPolynomial c2(p - 1, p);
      c2.coeff().row(i) = bubbles.col(j).transpose();
      basis.emplace_back(TensorPolynomial(p, p - 1), std::move(c2));
    }
  return basis;
}

std::vector<RTFunction> rt_edge_basis(int p)
{
  if (p < 1) throw std::invalid_argument("rt_edge_basis: p must be >= 1");
  std::vector<RTFunction> basis;
  basis.reserve(4 * p);
  const Eigen::VectorXd x = monomial_x_coefficients(p);       // xi in Pt basis
  Eigen::VectorXd xm1 = x;                                    // xi - 1
  xm1(0) -= 1.0;
  for (int edge = 1; edge <= 4; ++edge)
    for (int k = 0; k <= p - 1; ++k) {
      TensorPolynomial c1(p, p - 1), c2(p - 1, p);
      switch (edge) {
        case 1: // (0, (x2-1) Pt_k(x1))
          c2.coeff().row(k) = xm1.head(p + 1).transpose();
          break;
        case 2: // (x1 Pt_k(x2), 0)
          c1.coeff().col(k) = x.head(p + 1);
          break;
        case 3: // (0, x2 Pt_k(1-x1))
          c2.coeff().row(k) = (k % 2 ? -1.0 : 1.0) * x.head(p + 1).transpose();
          break;
        case 4: // ((x1-1) Pt_k(1-x2), 0)
          c1.coeff().col(k) = (k % 2 ? -1.0 : 1.0) * xm1.head(p + 1);
          break;
      }
      basis.emplace_back(std::move(c1), std::move(c2));
    }
  return basis;
}

std::vector<TensorPolynomial> scalar_bubble_basis(int p)
{
  if (p < 1) throw std::invalid_argument("scalar_bubble_basis: p must be >= 1");
  std::vector<TensorPolynomial> basis;
  basis.reserve((p - 1) * (p - 1));
  const Eigen::MatrixXd bubbles = bubble_basis_coefficients(p);
  for (int i = 0; i < p - 1; ++i)
    for (int j = 0; j < p - 1; ++j) {
      TensorPolynomial phi(p, p);
      phi.coeff() = bubbles.col(i) * bubbles.col(j).transpose();
      basis.push_back(std::move(phi));
    }
  return basis;
}

} // namespace hpbem
