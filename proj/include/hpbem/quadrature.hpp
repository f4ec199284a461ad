// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_QUADRATURE_HPP
#define HPBEM_QUADRATURE_HPP

#include <Eigen/Dense>

namespace hpbem {

/// Gauss-Legendre rule on [0,1]; exact for polynomials of degree <= 2n-1.
struct QuadratureRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
  int exactness = -1;

  int size() const { return static_cast<int>(points.size()); }
};

QuadratureRule gauss_legendre(int n);

/// Smallest Gauss rule exact for the given polynomial degree.
QuadratureRule gauss_for_degree(int degree);

} // namespace hpbem

#endif
