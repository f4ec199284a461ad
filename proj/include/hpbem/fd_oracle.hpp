// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_FD_ORACLE_HPP
#define HPBEM_FD_ORACLE_HPP

#include <functional>

#include "hpbem/fracform.hpp"

namespace hpbem {

// Direct second-order finite-difference discretization of the harmonic
// extension problems on the cube K x (0,1) that define the fractional inner
// products. Independent of the spectral route: no mode expansions are used.
//
// Grid n means n subintervals per direction. The linear systems are solved
// by diagonally preconditioned conjugate gradients to relative residual 1e-10.

/// Oracle value of <u,v> for the kinds living on K. Throws on the edge kind
/// (use fd_oracle_edge) and on CG failure.
double fd_oracle(FracKind kind, const std::function<double(double, double)>& u,
                 const std::function<double(double, double)>& v, int n);

/// Oracle value of the tilde H^{1/2} edge inner product; the problem is posed
/// on K itself with the data on one edge, so it is a 2D computation.
double fd_oracle_edge(const std::function<double(double)>& u,
                      const std::function<double(double)>& v, int n);

} // namespace hpbem

#endif
