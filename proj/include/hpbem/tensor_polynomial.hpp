// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_TENSOR_POLYNOMIAL_HPP
#define HPBEM_TENSOR_POLYNOMIAL_HPP

#include <Eigen/Dense>

#include "hpbem/legendre.hpp"

namespace hpbem {

// Reference square K = (0,1)^2. Edges are numbered 1..4 counterclockwise
// starting at the origin, with outward normals:
//
//   edge | from    | to      | point(sigma)    | normal
//   -----+---------+---------+-----------------+--------
//    1   | (0,0)   | (1,0)   | (sigma, 0)      | (0,-1)
//    2   | (1,0)   | (1,1)   | (1, sigma)      | (1, 0)
//    3   | (1,1)   | (0,1)   | (1-sigma, 1)    | (0, 1)
//    4   | (0,1)   | (0,0)   | (0, 1-sigma)    | (-1,0)

Eigen::Vector2d edge_point(int edge, double sigma);
Eigen::Vector2d edge_normal(int edge);
/// Reference corner ids 0..3 = (0,0),(1,0),(1,1),(0,1); edge i runs corner
/// (i-1) -> (i mod 4).
Eigen::Vector2d corner_point(int corner);
int edge_start_corner(int edge);
int edge_end_corner(int edge);

/// Bivariate polynomial on K stored by coefficients in the tensor product of
/// orthonormal shifted Legendre bases; coeff() is (degree_1+1) x (degree_2+1).
class TensorPolynomial {
public:
  TensorPolynomial() : m_coeff(Eigen::MatrixXd::Zero(1, 1)) {}
  TensorPolynomial(int degree_1, int degree_2);
  explicit TensorPolynomial(Eigen::MatrixXd coeff);

  int degree_1() const { return static_cast<int>(m_coeff.rows()) - 1; }
  int degree_2() const { return static_cast<int>(m_coeff.cols()) - 1; }
  const Eigen::MatrixXd& coeff() const { return m_coeff; }
  Eigen::MatrixXd& coeff() { return m_coeff; }

  double operator()(double x1, double x2) const;
  /// Tabulate on a tensor grid; entry (i,j) is the value at (x1(i), x2(j)).
  Eigen::MatrixXd values(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) const;

  TensorPolynomial derivative_1() const;
  TensorPolynomial derivative_2() const;

  /// Coefficients over x2 of the restriction to the line x1 = at (and vice versa).
  Eigen::VectorXd restrict_1(double at) const;
  Eigen::VectorXd restrict_2(double at) const;

  /// Zero-padded copy with the given (not smaller) degrees.
  TensorPolynomial embedded(int degree_1, int degree_2) const;

  double l2_norm() const { return m_coeff.norm(); }
  /// Integral over K; equals the (0,0) coefficient in an orthonormal basis.
  double mean() const { return m_coeff(0, 0); }

  TensorPolynomial operator-() const { return TensorPolynomial(-m_coeff); }
  TensorPolynomial& operator*=(double a) { m_coeff *= a; return *this; }

private:
  Eigen::MatrixXd m_coeff;
};

TensorPolynomial operator+(const TensorPolynomial& a, const TensorPolynomial& b);
TensorPolynomial operator-(const TensorPolynomial& a, const TensorPolynomial& b);
TensorPolynomial operator*(double a, const TensorPolynomial& f);
double l2_inner(const TensorPolynomial& a, const TensorPolynomial& b);

/// Coefficients of q(1-s) given those of q(s) (Legendre parity).
Eigen::VectorXd reflect_coefficients(Eigen::VectorXd c);

/// Member of P_p(K) equal to q(sigma) * blend(t) in the edge's arclength and
/// transverse coordinates (t = 0 on the edge). Vanishes on the other three
/// edges whenever q is an edge bubble and blend(1) = 0.
TensorPolynomial edge_blend_extension(int edge, const Eigen::VectorXd& q_sigma,
                                      const Eigen::VectorXd& blend_t, int p);

/// Univariate polynomial on an edge of K in the arclength parameter sigma,
/// stored in the orthonormal shifted Legendre basis.
class EdgePolynomial {
public:
  EdgePolynomial() : m_edge(1), m_coeff(Eigen::VectorXd::Zero(1)) {}
  EdgePolynomial(int edge, Eigen::VectorXd coeff);

  int edge() const { return m_edge; }
  int degree() const { return static_cast<int>(m_coeff.size()) - 1; }
  const Eigen::VectorXd& coeff() const { return m_coeff; }

  double operator()(double sigma) const;
  double value_at_zero() const;
  double value_at_one() const;
  /// Integral over the edge; equals the leading coefficient.
  double integral() const { return m_coeff(0); }
  /// True iff the polynomial vanishes at both endpoints (within tol * scale).
  bool is_bubble(double tol = 1e-12) const;

  EdgePolynomial& operator*=(double a) { m_coeff *= a; return *this; }

private:
  int m_edge;
  Eigen::VectorXd m_coeff;
};

} // namespace hpbem

#endif
