// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_INTERP_HPP
#define HPBEM_INTERP_HPP

#include <array>

#include "hpbem/fields.hpp"
#include "hpbem/fracform.hpp"
#include "hpbem/rt_function.hpp"

namespace hpbem {

/// L^2(K)-projection onto P_p(K). Idempotent on polynomials of degree <= p.
TensorPolynomial proj_L2(const TensorPolynomial& f, int p);
TensorPolynomial proj_L2(const std::function<double(double, double)>& f, int p,
                         int quad_points = -1);

/// tilde H^{-1/2}(K)-projection onto P_p(K), realized through the cosine-mode
/// Gram matrix with truncation M. Throws if the Gram conditioning exceeds 1e12.
TensorPolynomial proj_tildeHm12(const TensorPolynomial& f, int p, int truncation = 64);
TensorPolynomial proj_tildeHm12(const std::function<double(double, double)>& f, int p,
                                int truncation = 64);

/// Transverse profile of the polynomial extension used for edge interpolants.
enum class ExtensionBlend { linear, quadratic };

/// H^1-conforming projection-based interpolation onto P_p(K): vertex
/// interpolation, tilde H^{1/2}(l)-projection of the edge remainders, interior
/// H^1-seminorm projection onto P0_p(K).
TensorPolynomial interp_H1(const std::function<double(double, double)>& f, int p,
                           int truncation = 64, ExtensionBlend blend = ExtensionBlend::linear,
                           int quad_points = -1);

/// Per-edge primitive psi of the normal-trace defect: dpsi/dsigma = (u-u1).n,
/// psi = 0 at the vertices.
struct BoundaryPrimitive {
  std::array<EdgeModeSpectrum, 4> psi_spectrum;
  std::array<std::function<double(double)>, 4> psi;
  std::array<double, 4> vertex_defect;
};

BoundaryPrimitive boundary_primitive(const VectorField& u, const RTFunction& u1,
                                     int truncation = 64);

/// Decomposition u^p = u1 + u2p + u3p of the projection-based interpolant.
struct InterpolantBreakdown {
  RTFunction u1;
  RTFunction u2p;
  RTFunction u3p;
  RTFunction total;
  double interior_rcond = 1.0; // reciprocal condition estimate of the interior system
};

/// H(div)-conforming projection-based interpolant whose interior divergence
/// equation uses the L^2(K) inner product; commutes with proj_L2.
InterpolantBreakdown interp_div_l2(const VectorField& u, int p, int truncation = 64,
                                   ExtensionBlend blend = ExtensionBlend::linear,
                                   int quad_points = -1);

/// tilde H^{-1/2}(div)-conforming projection-based interpolant: the interior
/// divergence equation is posed in the tilde H^{-1/2}(K) inner product;
/// commutes with proj_tildeHm12 and reproduces RT_p(K).
InterpolantBreakdown interp_div_m12(const VectorField& u, int p, int truncation = 64,
                                    ExtensionBlend blend = ExtensionBlend::linear,
                                    int quad_points = -1);

/// Discrete inf-sup constant between A_p = RT0_p(K) and
/// B_p = curl P0_p(K) + grad div RT0_p(K) under the L^2(K) pairing.
struct InfSupReport {
  int p = 0;
  double computed = 0.0;
  double closed_form = 0.0; // sqrt(2(2p+1) / ((p+1)(p+2)))
  int dim_A = 0;
  int dim_B = 0;
  bool trivial_space = false; // p = 1: the bubble space is {0}
};

InfSupReport infsup_constant(int p);
double infsup_closed_form(int p);

/// Interpolant norm |u^p|_{L2} + |div u^p|_{tilde H^{-1/2}} across degrees.
struct StabilityRow {
  int p;
  double l2_norm;
  double div_norm;
  double total;
};

std::vector<StabilityRow> stability_scan(const VectorField& u, int p_min, int p_max,
                                         int truncation = 64);

/// Least-squares slope of log(total) against log(p).
double fit_loglog_slope(const std::vector<StabilityRow>& rows);

} // namespace hpbem

#endif
