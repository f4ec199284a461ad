// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_FIELDS_HPP
#define HPBEM_FIELDS_HPP

#include <cstdint>
#include <functional>

#include "hpbem/rt_function.hpp"

namespace hpbem {

/// Vector field on K with an evaluable divergence.
struct VectorField {
  std::function<Eigen::Vector2d(double, double)> value;
  std::function<double(double, double)> divergence;
};

VectorField vector_field(const RTFunction& v);

/// Deterministic xoshiro256** generator (seeded via splitmix64); identical
/// streams on every platform, unlike the std distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0,1).
  double uniform();
  double uniform(double a, double b);

private:
  std::uint64_t m_state[4];
};

/// Trigonometric field with random coefficients and closed-form divergence;
/// smooth on the closed square but not polynomial.
VectorField random_smooth_field(Rng& rng, int modes = 3);

/// Smooth scalar with an evaluable gradient.
struct SmoothScalar {
  std::function<double(double, double)> value;
  std::function<Eigen::Vector2d(double, double)> gradient;
};

SmoothScalar random_smooth_scalar(Rng& rng, int modes = 3);

/// Divergence-free field (d2 phi, -d1 phi) of a smooth scalar.
VectorField curl_field(const SmoothScalar& phi);

/// Fixed smooth non-polynomial field.
VectorField smooth_field();

/// Gradient of the harmonic corner function Re((z - z0)^{2/3}) with the branch
/// point z0 = (-delta, -delta) just outside the corner of K; divergence-free,
/// with gradient blow-up ~ rho^{-1/3} toward the corner.
VectorField corner_singular_field(double delta = 1e-3);

} // namespace hpbem

#endif
