// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_RT_FUNCTION_HPP
#define HPBEM_RT_FUNCTION_HPP

#include <vector>

#include "hpbem/tensor_polynomial.hpp"

namespace hpbem {

/// Member of the Raviart-Thomas space RT_p(K) = P_{p,p-1}(K) x P_{p-1,p}(K), p >= 1.
class RTFunction {
public:
  explicit RTFunction(int order);
  RTFunction(TensorPolynomial component_1, TensorPolynomial component_2);

  int order() const { return m_order; }
  const TensorPolynomial& component_1() const { return m_c1; }
  const TensorPolynomial& component_2() const { return m_c2; }

  Eigen::Vector2d operator()(double x1, double x2) const;

  /// d1 v1 + d2 v2, exact in coefficients; degrees (p-1, p-1).
  TensorPolynomial divergence() const;

  /// v.n on the given edge in the arclength parameter; degree p-1.
  EdgePolynomial normal_trace(int edge) const;

  /// Integral of v.n over the edge.
  double flux(int edge) const { return normal_trace(edge).integral(); }

  double l2_norm() const;

  /// Zero-padded copy of order p_new >= p.
  RTFunction embedded(int p_new) const;

  RTFunction operator-() const { return RTFunction(-m_c1, -m_c2); }

private:
  int m_order;
  TensorPolynomial m_c1, m_c2;
};

RTFunction operator+(const RTFunction& a, const RTFunction& b);
RTFunction operator-(const RTFunction& a, const RTFunction& b);
RTFunction operator*(double a, const RTFunction& v);
double l2_inner(const RTFunction& a, const RTFunction& b);

/// curl phi = (d2 phi, -d1 phi); maps P_p(K) into RT_p(K) with zero divergence.
RTFunction scalar_curl(const TensorPolynomial& phi);

/// Stacked coefficient vector (component_1 flattened row-major, then component_2).
Eigen::VectorXd rt_coefficients(const RTFunction& v);
RTFunction rt_from_coefficients(int p, const Eigen::VectorXd& c);
int rt_dimension(int p);        // 2p(p+1)
int rt_bubble_dimension(int p); // 2p(p-1)

/// Tensor-product basis of RT_p(K), dimension 2p(p+1).
std::vector<RTFunction> rt_basis(int p);

/// Basis of the bubble subspace RT0_p(K) (vanishing normal trace), dimension 2p(p-1).
std::vector<RTFunction> rt_bubble_basis(int p);

/// Edge-flux basis: 4p functions ordered edge-major; the function for
/// (edge i, mode k) has normal trace Pt_k(sigma) on edge i and zero on the
/// other edges. Together with rt_bubble_basis it spans RT_p(K).
std::vector<RTFunction> rt_edge_basis(int p);

/// Scalar bubble basis of P0_p(K), dimension (p-1)^2.
std::vector<TensorPolynomial> scalar_bubble_basis(int p);

} // namespace hpbem

#endif
