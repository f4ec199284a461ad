// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_FRACFORM_HPP
#define HPBEM_FRACFORM_HPP

#include <functional>

#include "hpbem/tensor_polynomial.hpp"

namespace hpbem {

// Fractional Sobolev inner products on K and its edges, realized through
// truncated expansions in the Laplace eigenfunctions of the extension
// problems on the cube K x (0,1):
//
//   sine modes    s_m(x) = sqrt(2) sin(m pi x),      m >= 1,
//   cosine modes  c_0 = 1, c_m(x) = sqrt(2) cos(m pi x), m >= 1,
//
// tensorized over K. Separation of variables gives diagonal inner products
// with per-mode weights (lambda_mn = pi sqrt(m^2+n^2)):
//
//   tilde H^{1/2}(K):   lambda * coth(lambda)          (sine)
//   H^{-1/2}(K):        tanh(lambda) / lambda          (sine)
//   tilde H^{-1/2}(K):  1 at (0,0), tanh/lambda else   (cosine)
//   tilde H^{1/2}(l):   m pi * coth(m pi)              (edge sine)

enum class ModeKind { sine, cosine };

enum class FracKind { tildeH12_K, Hm12_K, tildeHm12_K, tildeH12_edge };

const char* to_string(FracKind kind);

/// Truncated expansion of a scalar field on K in L^2-orthonormal modes.
/// Sine spectra store coeff(m-1, n-1) for 1 <= m,n <= M; cosine spectra store
/// coeff(m, n) for 0 <= m,n <= M.
struct ModeSpectrum {
  ModeKind kind = ModeKind::sine;
  int truncation = 0;
  Eigen::MatrixXd coeff;

  double parseval_sum() const { return coeff.squaredNorm(); }
};

/// Sine expansion coefficients of a function on an edge of K.
struct EdgeModeSpectrum {
  int edge = 1;
  Eigen::VectorXd coeff; // m = 1..M

  int truncation() const { return static_cast<int>(coeff.size()); }
};

/// Diagonal weight table of one of the four inner products.
struct FracWeightTable {
  FracKind kind;
  Eigen::MatrixXd weights; // matching spectrum layout; edge kind uses a column
};

FracWeightTable frac_weight_table(FracKind kind, int truncation);

/// Mode values at given points; columns are modes (sine: m=1..M, cosine: m=0..M).
Eigen::MatrixXd sine_mode_values(int truncation, const Eigen::VectorXd& x);
Eigen::MatrixXd cosine_mode_values(int truncation, const Eigen::VectorXd& x);

/// Transform matrices from orthonormal Legendre coefficients to mode
/// coefficients, T(m, j) = <mode_m, Pt_j>_{L^2(0,1)}.
Eigen::MatrixXd sine_transform_of_legendre(int degree, int truncation);
Eigen::MatrixXd cosine_transform_of_legendre(int degree, int truncation);

/// Mode expansion of a polynomial (quadrature with 2M+8 Gauss points per
/// direction, exact for the mode-polynomial products that occur).
ModeSpectrum expand(const TensorPolynomial& f, ModeKind kind, int truncation);

/// Mode expansion of a general evaluator. quad_points (per direction) must be
/// at least 2*truncation, otherwise a resolution error is thrown; the default
/// 2M+8 resolves the highest mode with margin.
ModeSpectrum expand(const std::function<double(double, double)>& f, ModeKind kind,
                    int truncation, int quad_points = -1);

EdgeModeSpectrum edge_expand(const std::function<double(double)>& f, int edge, int truncation,
                             int quad_points = -1);
EdgeModeSpectrum edge_expand_legendre(const Eigen::VectorXd& coeff, int edge, int truncation);

double ip_tildeH12_K(const ModeSpectrum& u, const ModeSpectrum& v);
double ip_Hm12_K(const ModeSpectrum& u, const ModeSpectrum& v);
double ip_tildeHm12_K(const ModeSpectrum& u, const ModeSpectrum& v);
double ip_tildeH12_edge(const EdgeModeSpectrum& u, const EdgeModeSpectrum& v);

double norm_tildeHm12_K(const ModeSpectrum& u);
double norm_Hm12_K(const ModeSpectrum& u);

} // namespace hpbem

#endif
