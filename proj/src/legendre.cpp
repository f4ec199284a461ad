// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/legendre.hpp"

#include <cmath>
#include <stdexcept>

namespace hpbem {

Eigen::VectorXd legendre_values(int degree, double x)
{
  if (degree < 0) throw std::invalid_argument("legendre_values: negative degree");
  Eigen::VectorXd v(degree + 1);
  const double t = 2.0 * x - 1.0;
  double lm = 1.0, l = t;
  v(0) = 1.0;
  if (degree >= 1) v(1) = std::sqrt(3.0) * t;
  for (int k = 2; k <= degree; ++k) {
    const double lnew = ((2 * k - 1) * t * l - (k - 1) * lm) / k;
    lm = l;
    l = lnew;
    v(k) = std::sqrt(2.0 * k + 1.0) * l;
  }
  return v;
}

Eigen::MatrixXd legendre_values(int degree, const Eigen::VectorXd& x)
{
  Eigen::MatrixXd v(x.size(), degree + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) v.row(i) = legendre_values(degree, x(i)).transpose();
  return v;
}

Eigen::MatrixXd legendre_derivative_matrix(int degree)
{
  if (degree < 1) return Eigen::MatrixXd::Zero(std::max(degree, 0), degree + 1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(degree, degree + 1);
  for (int k = 1; k <= degree; ++k)
    for (int j = k - 1; j >= 0; j -= 2)
      d(j, k) = 2.0 * std::sqrt((2.0 * j + 1.0) * (2.0 * k + 1.0));
  return d;
}

Eigen::VectorXd legendre_values_at_one(int degree)
{
  Eigen::VectorXd v(degree + 1);
  for (int k = 0; k <= degree; ++k) v(k) = std::sqrt(2.0 * k + 1.0);
  return v;
}

Eigen::VectorXd legendre_values_at_zero(int degree)
{
  Eigen::VectorXd v = legendre_values_at_one(degree);
  for (int k = 1; k <= degree; k += 2) v(k) = -v(k);
  return v;
}

Eigen::VectorXd monomial_x_coefficients(int degree)
{
  if (degree < 1) throw std::invalid_argument("monomial_x_coefficients: degree must be >= 1");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(degree + 1);
  c(0) = 0.5;
  c(1) = 0.5 / std::sqrt(3.0);
  return c;
}

Eigen::MatrixXd bubble_basis_coefficients(int p)
{
  if (p < 1) throw std::invalid_argument("bubble_basis_coefficients: p must be >= 1");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p + 1, std::max(p - 1, 0));
  for (int k = 2; k <= p; ++k) {
    b(k, k - 2) = 1.0 / std::sqrt(2.0 * k + 1.0);
    b(k - 2, k - 2) = -1.0 / std::sqrt(2.0 * k - 3.0);
  }
  return b;
}

} // namespace hpbem
