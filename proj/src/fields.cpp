// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/fields.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace hpbem {

VectorField vector_field(const RTFunction& v)
{
  VectorField f;
  f.value = [v](double x1, double x2) { return v(x1, x2); };
  const TensorPolynomial d = v.divergence();
  f.divergence = [d](double x1, double x2) { return d(x1, x2); };
  return f;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Rng::Rng(std::uint64_t seed)
{
  std::uint64_t s = seed;
  for (auto& w : m_state) w = splitmix64(s);
}

std::uint64_t Rng::next()
{
  const std::uint64_t result = rotl(m_state[1] * 5, 7) * 9;
  const std::uint64_t t = m_state[1] << 17;
  m_state[2] ^= m_state[0];
  m_state[3] ^= m_state[1];
  m_state[1] ^= m_state[2];
  m_state[0] ^= m_state[3];
  m_state[2] ^= t;
  m_state[3] = rotl(m_state[3], 45);
  return result;
}

double Rng::uniform()
{
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b)
{
  return a + (b - a) * uniform();
}

VectorField random_smooth_field(Rng& rng, int modes)
{
  constexpr double pi = 3.14159265358979323846;
  struct Term {
    double a1, a2, w1, w2, ph1, ph2; // a * cos(w1 x1 + ph1) * cos(w2 x2 + ph2) per component
  };
  std::vector<Term> terms;
  for (int m = 0; m < modes; ++m) {
    Term t;
    t.a1 = rng.uniform(-1.0, 1.0);
    t.a2 = rng.uniform(-1.0, 1.0);
    t.w1 = pi * rng.uniform(0.5, 2.5);
    t.w2 = pi * rng.uniform(0.5, 2.5);
    t.ph1 = rng.uniform(0.0, 2.0 * pi);
    t.ph2 = rng.uniform(0.0, 2.0 * pi);
    terms.push_back(t);
  }
  VectorField f;
  f.value = [terms](double x1, double x2) {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (const auto& t : terms) {
      v(0) += t.a1 * std::cos(t.w1 * x1 + t.ph1) * std::cos(t.w2 * x2 + t.ph2);
      v(1) += t.a2 * std::sin(t.w1 * x1 + t.ph1) * std::sin(t.w2 * x2 + t.ph2);
    }
    return v;
  };
  f.divergence = [terms](double x1, double x2) {
    double d = 0.0;
    for (const auto& t : terms) {
      d += -t.a1 * t.w1 * std::sin(t.w1 * x1 + t.ph1) * std::cos(t.w2 * x2 + t.ph2);
      d += t.a2 * t.w2 * std::sin(t.w1 * x1 + t.ph1) * std::cos(t.w2 * x2 + t.ph2);
    }
    return d;
  };
  return f;
}

SmoothScalar random_smooth_scalar(Rng& rng, int modes)
{
  constexpr double pi = 3.14159265358979323846;
  struct Term {
    double a, w1, w2, ph1, ph2;
  };
  std::vector<Term> terms;
  for (int m = 0; m < modes; ++m)
    terms.push_back({rng.uniform(-1.0, 1.0), pi * rng.uniform(0.5, 2.5), pi * rng.uniform(0.5, 2.5),
                     rng.uniform(0.0, 2.0 * pi), rng.uniform(0.0, 2.0 * pi)});
  SmoothScalar f;
  f.value = [terms](double x1, double x2) {
    double v = 0.0;
    for (const auto& t : terms) v += t.a * std::cos(t.w1 * x1 + t.ph1) * std::cos(t.w2 * x2 + t.ph2);
    return v;
  };
  f.gradient = [terms](double x1, double x2) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (const auto& t : terms) {
      g(0) += -t.a * t.w1 * std::sin(t.w1 * x1 + t.ph1) * std::cos(t.w2 * x2 + t.ph2);
      g(1) += -t.a * t.w2 * std::cos(t.w1 * x1 + t.ph1) * std::sin(t.w2 * x2 + t.ph2);
    }
    return g;
  };
  return f;
}

VectorField curl_field(const SmoothScalar& phi)
{
  VectorField f;
  auto grad = phi.gradient;
  f.value = [grad](double x1, double x2) {
    const Eigen::Vector2d g = grad(x1, x2);
    return Eigen::Vector2d(g(1), -g(0));
  };
  f.divergence = [](double, double) { return 0.0; };
  return f;
}

VectorField smooth_field()
{
  constexpr double pi = 3.14159265358979323846;
  VectorField f;
  f.value = [](double x1, double x2) {
    return Eigen::Vector2d(std::sin(pi * x1 + 0.3) * std::cos(pi * x2),
                           std::exp(x1 - x2) * std::cos(0.5 * pi * x1));
  };
  f.divergence = [](double x1, double x2) {
    return pi * std::cos(pi * x1 + 0.3) * std::cos(pi * x2) -
           std::exp(x1 - x2) * std::cos(0.5 * pi * x1);
  };
  return f;
}

VectorField corner_singular_field(double delta)
{
  VectorField f;
  f.value = [delta](double x1, double x2) {
    const std::complex<double> z(x1 + delta, x2 + delta);
    // d/dz Re(z^{2/3}) gives the gradient of a harmonic function.
    const std::complex<double> g = (2.0 / 3.0) * std::pow(z, -1.0 / 3.0);
    return Eigen::Vector2d(g.real(), -g.imag());
  };
  f.divergence = [](double, double) { return 0.0; };
  return f;
}

} // namespace hpbem
