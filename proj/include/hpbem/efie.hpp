// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_EFIE_HPP
#define HPBEM_EFIE_HPP

#include <complex>
#include <string>

#include "hpbem/surface.hpp"

namespace hpbem {

/// Time-harmonic excitation: plane wave with direction d and polarization
/// orthogonal to d, for the wave number k > 0.
struct WaveContext {
  double k = 1.0;
  Eigen::Vector3d direction = Eigen::Vector3d(0, 0, -1);
  Eigen::Vector3d polarization = Eigen::Vector3d(1, 0, 0);

  void validate() const;
};

struct AssemblyInfo {
  int quad_order = 0;
  int n_identical = 0;
  int n_edge = 0;
  int n_vertex = 0;
  int n_far = 0;
  double seconds = 0.0;
};

/// Dense Galerkin system for Rumsey's formulation on X_hp.
struct GalerkinSystem {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
  AssemblyInfo info;
};

/// Galerkin matrix of <Psi_k div u, div v> - k^2 <Psi_k u, v> with the kernel
/// e^{ik|x-y|} / (4 pi |x-y|). Element pairs are classified as identical /
/// shared-edge / shared-vertex / disjoint; the singular classes are integrated
/// with Duffy-type regularizing coordinate transforms of tensor order q, far
/// pairs with plain tensor Gauss of the same order.
Eigen::MatrixXcd efie_matrix(const GlobalRTSpace& space, double k, int quad_order,
                             AssemblyInfo* info = nullptr);

/// k = 0 single-layer blocks <Psi_0 div u, div v> and <Psi_0 u, v> (real).
struct SingleLayerBlocks {
  Eigen::MatrixXd div_block;
  Eigen::MatrixXd field_block;
};
SingleLayerBlocks single_layer_blocks(const GlobalRTSpace& space, int quad_order);

/// Energy-surrogate Gram G = div_block + field_block; symmetric positive
/// definite on X_hp.
Eigen::MatrixXd energy_matrix(const GlobalRTSpace& space, int quad_order);

/// sqrt(e^H G e); used for convergence monitoring only.
double energy_surrogate(const Eigen::VectorXcd& coeffs, const Eigen::MatrixXd& energy_gram);

/// Right-hand side <f, phi_m> for the tangential-components trace of the
/// incident plane wave.
Eigen::VectorXcd rhs_plane_wave(const GlobalRTSpace& space, const WaveContext& wave,
                                int quad_order);

GalerkinSystem assemble(const GlobalRTSpace& space, const WaveContext& wave, int quad_order = -1);

struct SolveResult {
  Eigen::VectorXcd solution;
  double residual = std::numeric_limits<double>::infinity();
  bool ok = false;
  std::string message;
};

/// Pivoted dense solve; failure (singular to working precision) is reported in
/// the result, not thrown.
SolveResult solve(const GalerkinSystem& system, int dense_limit = 4000);

} // namespace hpbem

#endif
