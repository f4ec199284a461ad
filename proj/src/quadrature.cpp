// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hpbem {

namespace {

// Golub-Welsch on the Legendre Jacobi matrix, then map [-1,1] -> [0,1].
QuadratureRule compute_gauss(int n)
{
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points(i) = 0.5 * (es.eigenvalues()(i) + 1.0);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights(i) = v0 * v0; // 2*v0^2 on [-1,1], halved by the affine map
  }
  rule.exactness = 2 * n - 1;
  return rule;
}

} // namespace

QuadratureRule gauss_legendre(int n)
{
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  static std::mutex mtx;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

QuadratureRule gauss_for_degree(int degree)
{
  return gauss_legendre(degree / 2 + 1);
}

} // namespace hpbem
