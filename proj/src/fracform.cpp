// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/fracform.hpp"

#include <cmath>
#include <stdexcept>

#include "hpbem/quadrature.hpp"

namespace hpbem {

namespace {

constexpr double pi = 3.14159265358979323846;

double coth(double x) { return 1.0 / std::tanh(x); }

void check_pair(const ModeSpectrum& u, const ModeSpectrum& v, ModeKind expected)
{
  if (u.kind != expected || v.kind != expected)
    throw std::invalid_argument("fracform: mode kind mismatch for this inner product");
  if (u.truncation != v.truncation)
    throw std::invalid_argument("fracform: spectra have different truncations");
}

double weighted_sum(const ModeSpectrum& u, const ModeSpectrum& v, const FracWeightTable& table)
{
  return u.coeff.cwiseProduct(v.coeff).cwiseProduct(table.weights).sum();
}

} // namespace

const char* to_string(FracKind kind)
{
  switch (kind) {
    case FracKind::tildeH12_K: return "tildeH12_K";
    case FracKind::Hm12_K: return "Hm12_K";
    case FracKind::tildeHm12_K: return "tildeHm12_K";
    default: return "tildeH12_edge";
  }
}

FracWeightTable frac_weight_table(FracKind kind, int truncation)
{
  if (truncation < 1) throw std::invalid_argument("frac_weight_table: truncation must be >= 1");
  FracWeightTable table;
  table.kind = kind;
  switch (kind) {
    case FracKind::tildeH12_K: {
      table.weights.resize(truncation, truncation);
      for (int m = 1; m <= truncation; ++m)
        for (int n = 1; n <= truncation; ++n) {
          const double lambda = pi * std::sqrt(double(m) * m + double(n) * n);
          table.weights(m - 1, n - 1) = lambda * coth(lambda);
        }
      break;
    }
    case FracKind::Hm12_K: {
      table.weights.resize(truncation, truncation);
      for (int m = 1; m <= truncation; ++m)
        for (int n = 1; n <= truncation; ++n) {
          const double lambda = pi * std::sqrt(double(m) * m + double(n) * n);
          table.weights(m - 1, n - 1) = std::tanh(lambda) / lambda;
        }
      break;
    }
    case FracKind::tildeHm12_K: {
      table.weights.resize(truncation + 1, truncation + 1);
      for (int m = 0; m <= truncation; ++m)
        for (int n = 0; n <= truncation; ++n) {
          if (m == 0 && n == 0) {
            table.weights(0, 0) = 1.0;
          } else {
            const double lambda = pi * std::sqrt(double(m) * m + double(n) * n);
            table.weights(m, n) = std::tanh(lambda) / lambda;
          }
        }
      break;
    }
    case FracKind::tildeH12_edge: {
      table.weights.resize(truncation, 1);
      for (int m = 1; m <= truncation; ++m)
        table.weights(m - 1, 0) = (m * pi) * coth(m * pi);
      break;
    }
  }
  return table;
}

Eigen::MatrixXd sine_mode_values(int truncation, const Eigen::VectorXd& x)
{
  Eigen::MatrixXd v(x.size(), truncation);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int m = 1; m <= truncation; ++m) v(i, m - 1) = std::sqrt(2.0) * std::sin(m * pi * x(i));
  return v;
}

Eigen::MatrixXd cosine_mode_values(int truncation, const Eigen::VectorXd& x)
{
  Eigen::MatrixXd v(x.size(), truncation + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    v(i, 0) = 1.0;
    for (int m = 1; m <= truncation; ++m) v(i, m) = std::sqrt(2.0) * std::cos(m * pi * x(i));
  }
  return v;
}

Eigen::MatrixXd sine_transform_of_legendre(int degree, int truncation)
{
  const QuadratureRule rule = gauss_legendre(2 * truncation + 8);
  const Eigen::MatrixXd modes = sine_mode_values(truncation, rule.points);
  const Eigen::MatrixXd leg = legendre_values(degree, rule.points);
  return modes.transpose() * rule.weights.asDiagonal() * leg;
}

Eigen::MatrixXd cosine_transform_of_legendre(int degree, int truncation)
{
  const QuadratureRule rule = gauss_legendre(2 * truncation + 8);
  const Eigen::MatrixXd modes = cosine_mode_values(truncation, rule.points);
  const Eigen::MatrixXd leg = legendre_values(degree, rule.points);
  return modes.transpose() * rule.weights.asDiagonal() * leg;
}

ModeSpectrum expand(const TensorPolynomial& f, ModeKind kind, int truncation)
{
  if (truncation < 1) throw std::invalid_argument("expand: truncation must be >= 1");
  ModeSpectrum s;
  s.kind = kind;
  s.truncation = truncation;
  if (kind == ModeKind::sine) {
    const Eigen::MatrixXd t1 = sine_transform_of_legendre(f.degree_1(), truncation);
    const Eigen::MatrixXd t2 = sine_transform_of_legendre(f.degree_2(), truncation);
    s.coeff = t1 * f.coeff() * t2.transpose();
  } else {
    const Eigen::MatrixXd t1 = cosine_transform_of_legendre(f.degree_1(), truncation);
    const Eigen::MatrixXd t2 = cosine_transform_of_legendre(f.degree_2(), truncation);
    s.coeff = t1 * f.coeff() * t2.transpose();
  }
  return s;
}

ModeSpectrum expand(const std::function<double(double, double)>& f, ModeKind kind, int truncation,
                    int quad_points)
{
  if (truncation < 1) throw std::invalid_argument("expand: truncation must be >= 1");
  if (quad_points < 0) quad_points = 2 * truncation + 8;
  if (quad_points < 2 * truncation)
    throw std::invalid_argument("expand: quadrature resolution below 2M points per direction");
  const QuadratureRule rule = gauss_legendre(quad_points);
  Eigen::MatrixXd values(quad_points, quad_points);
  for (int i = 0; i < quad_points; ++i)
    for (int j = 0; j < quad_points; ++j) values(i, j) = f(rule.points(i), rule.points(j));
  const Eigen::MatrixXd modes = (kind == ModeKind::sine)
                                    ? sine_mode_values(truncation, rule.points)
                                    : cosine_mode_values(truncation, rule.points);
  const Eigen::MatrixXd weighted = rule.weights.asDiagonal() * modes;
  ModeSpectrum s;
  s.kind = kind;
  s.truncation = truncation;
  s.coeff = weighted.transpose() * values * weighted;
  return s;
}

EdgeModeSpectrum edge_expand(const std::function<double(double)>& f, int edge, int truncation,
                             int quad_points)
{
  if (truncation < 1) throw std::invalid_argument("edge_expand: truncation must be >= 1");
  if (quad_points < 0) quad_points = 2 * truncation + 8;
  if (quad_points < 2 * truncation)
    throw std::invalid_argument("edge_expand: quadrature resolution below 2M points");
  const QuadratureRule rule = gauss_legendre(quad_points);
  Eigen::VectorXd values(quad_points);
  for (int i = 0; i < quad_points; ++i) values(i) = f(rule.points(i));
  const Eigen::MatrixXd modes = sine_mode_values(truncation, rule.points);
  EdgeModeSpectrum s;
  s.edge = edge;
  s.coeff = modes.transpose() * rule.weights.asDiagonal() * values;
  return s;
}

EdgeModeSpectrum edge_expand_legendre(const Eigen::VectorXd& coeff, int edge, int truncation)
{
  EdgeModeSpectrum s;
  s.edge = edge;
  s.coeff = sine_transform_of_legendre(static_cast<int>(coeff.size()) - 1, truncation) * coeff;
  return s;
}

double ip_tildeH12_K(const ModeSpectrum& u, const ModeSpectrum& v)
{
  check_pair(u, v, ModeKind::sine);
  return weighted_sum(u, v, frac_weight_table(FracKind::tildeH12_K, u.truncation));
}

double ip_Hm12_K(const ModeSpectrum& u, const ModeSpectrum& v)
{
  check_pair(u, v, ModeKind::sine);
  return weighted_sum(u, v, frac_weight_table(FracKind::Hm12_K, u.truncation));
}

double ip_tildeHm12_K(const ModeSpectrum& u, const ModeSpectrum& v)
{
  check_pair(u, v, ModeKind::cosine);
  return weighted_sum(u, v, frac_weight_table(FracKind::tildeHm12_K, u.truncation));
}

double ip_tildeH12_edge(const EdgeModeSpectrum& u, const EdgeModeSpectrum& v)
{
  if (u.truncation() != v.truncation())
    throw std::invalid_argument("ip_tildeH12_edge: spectra have different truncations");
  const FracWeightTable table = frac_weight_table(FracKind::tildeH12_edge, u.truncation());
  return u.coeff.cwiseProduct(v.coeff).cwiseProduct(table.weights.col(0)).sum();
}

double norm_tildeHm12_K(const ModeSpectrum& u)
{
  return std::sqrt(std::max(0.0, ip_tildeHm12_K(u, u)));
}

double norm_Hm12_K(const ModeSpectrum& u)
{
  return std::sqrt(std::max(0.0, ip_Hm12_K(u, u)));
}

} // namespace hpbem
