// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_LEGENDRE_HPP
#define HPBEM_LEGENDRE_HPP

#include <Eigen/Dense>

namespace hpbem {

// All polynomial storage in this library uses the L^2(0,1)-orthonormal
// shifted Legendre basis  Pt_k(x) = sqrt(2k+1) * L_k(2x-1),  k = 0..degree.

/// Values Pt_0(x) .. Pt_degree(x).
Eigen::VectorXd legendre_values(int degree, double x);

/// Row i holds the basis values at x(i); shape (x.size(), degree+1).
Eigen::MatrixXd legendre_values(int degree, const Eigen::VectorXd& x);

/// Coefficient map of d/dx: if q has coefficients c (size n+1), q' has
/// coefficients D*c (size n). D(j,k) = 2*sqrt((2j+1)(2k+1)) for j<k, k-j odd.
Eigen::MatrixXd legendre_derivative_matrix(int degree);

/// Basis values at the endpoints: Pt_k(1) = sqrt(2k+1), Pt_k(0) = (-1)^k sqrt(2k+1).
Eigen::VectorXd legendre_values_at_one(int degree);
Eigen::VectorXd legendre_values_at_zero(int degree);

/// Coefficients of the monomial x in the orthonormal basis (degree >= 1).
Eigen::VectorXd monomial_x_coefficients(int degree);

/// 1D bubble basis b_k = (L_k - L_{k-2})(2x-1), k = 2..p, spanning the
/// polynomials of degree <= p that vanish at both endpoints. Returned as a
/// (p+1) x (p-1) matrix of orthonormal-Legendre coefficient columns.
Eigen::MatrixXd bubble_basis_coefficients(int p);

} // namespace hpbem

#endif
