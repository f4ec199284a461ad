// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/fd_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hpbem {

namespace {

// Conservative FD energy form on a box grid: edge differences weighted by the
// transverse dual-cell fractions (1/2 on boundary planes). Dirichlet nodes are
// eliminated by masking; Neumann data enters the right-hand side with
// trapezoidal surface weights, which keeps the scheme variationally consistent.

double node_factor(int i, int n) { return (i == 0 || i == n) ? 0.5 : 1.0; }

struct Grid3 {
  int n;
  double h;
  std::vector<char> dirichlet; // per node
  Eigen::VectorXd fixed;       // Dirichlet values, 0 elsewhere

  explicit Grid3(int n_) : n(n_), h(1.0 / n_), dirichlet((n_ + 1) * (n_ + 1) * (n_ + 1), 0),
                           fixed(Eigen::VectorXd::Zero((n_ + 1) * (n_ + 1) * (n_ + 1))) {}

  int idx(int i, int j, int k) const { return (k * (n + 1) + j) * (n + 1) + i; }
  int size() const { return (n + 1) * (n + 1) * (n + 1); }

  // y = A x over all nodes (Dirichlet rows included; masked by the caller).
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const
  {
    y.setZero();
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j) {
        const double bjk = h * node_factor(j, n) * node_factor(k, n);
        for (int i = 0; i < n; ++i) {
          const int a = idx(i, j, k), b = idx(i + 1, j, k);
          const double d = bjk * (x(a) - x(b));
          y(a) += d;
          y(b) -= d;
        }
      }
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i <= n; ++i) {
        const double bik = h * node_factor(i, n) * node_factor(k, n);
        for (int j = 0; j < n; ++j) {
          const int a = idx(i, j, k), b = idx(i, j + 1, k);
          const double d = bik * (x(a) - x(b));
          y(a) += d;
          y(b) -= d;
        }
      }
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const double bij = h * node_factor(i, n) * node_factor(j, n);
        for (int k = 0; k < n; ++k) {
          const int a = idx(i, j, k), b = idx(i, j, k + 1);
          const double d = bij * (x(a) - x(b));
          y(a) += d;
          y(b) -= d;
        }
      }
  }

  Eigen::VectorXd diagonal() const
  {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(size());
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
          double s = 0.0;
          if (i > 0) s += h * node_factor(j, n) * node_factor(k, n);
          if (i < n) s += h * node_factor(j, n) * node_factor(k, n);
          if (j > 0) s += h * node_factor(i, n) * node_factor(k, n);
          if (j < n) s += h * node_factor(i, n) * node_factor(k, n);
          if (k > 0) s += h * node_factor(i, n) * node_factor(j, n);
          if (k < n) s += h * node_factor(i, n) * node_factor(j, n);
          d(idx(i, j, k)) = s;
        }
    return d;
  }
};

void mask_dirichlet(const std::vector<char>& dirichlet, Eigen::VectorXd& v)
{
  for (size_t m = 0; m < dirichlet.size(); ++m)
    if (dirichlet[m]) v(static_cast<int>(m)) = 0.0;
}

// Preconditioned CG on the masked system A u = b, u = 0 on Dirichlet nodes.
Eigen::VectorXd solve_cg(const Grid3& grid, const Eigen::VectorXd& b, double tol)
{
  const int nn = grid.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nn);
  Eigen::VectorXd r = b;
  mask_dirichlet(grid.dirichlet, r);
  Eigen::VectorXd diag = grid.diagonal();
  for (int m = 0; m < nn; ++m)
    if (diag(m) <= 0.0) diag(m) = 1.0;
  Eigen::VectorXd z = r.cwiseQuotient(diag);
  mask_dirichlet(grid.dirichlet, z);
  Eigen::VectorXd p = z, ap(nn);
  double rz = r.dot(z);
  const double b_norm = std::max(r.norm(), 1e-300);
  const int max_iter = 80 * grid.n + 2000;
  for (int it = 0; it < max_iter; ++it) {
    if (r.norm() <= tol * b_norm) return x;
    grid.apply(p, ap);
    mask_dirichlet(grid.dirichlet, ap);
    const double alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    z = r.cwiseQuotient(diag);
    mask_dirichlet(grid.dirichlet, z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw std::runtime_error("fd_oracle: conjugate gradient did not converge");
}

// Solution of the extension problem for the given kind with surface data g.
Eigen::VectorXd extension_solution(FracKind kind, const std::function<double(double, double)>& g,
                                   int n)
{
  Grid3 grid(n);
  const double h = grid.h;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const bool side = (i == 0 || i == n || j == 0 || j == n);
        const bool top = (k == n), bottom = (k == 0);
        bool dir = false;
        switch (kind) {
          case FracKind::Hm12_K: dir = side || top; break;
          case FracKind::tildeHm12_K: dir = top; break;
          case FracKind::tildeH12_K: dir = side || top || bottom; break;
          default: break;
        }
        if (dir) grid.dirichlet[grid.idx(i, j, k)] = 1;
      }

  Eigen::VectorXd b = Eigen::VectorXd::Zero(grid.size());
  if (kind == FracKind::tildeH12_K) {
    // Dirichlet lifting of the bottom trace g (zero on the rest of the boundary).
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i) grid.fixed(grid.idx(i, j, 0)) = g(i * h, j * h);
    Eigen::VectorXd af(grid.size());
    grid.apply(grid.fixed, af);
    b = -af;
  } else {
    // Neumann data on the bottom face with trapezoidal surface weights.
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const int m = grid.idx(i, j, 0);
        if (!grid.dirichlet[m])
          b(m) = h * h * node_factor(i, n) * node_factor(j, n) * g(i * h, j * h);
      }
  }
  Eigen::VectorXd u = solve_cg(grid, b, 1e-10);
  return u + grid.fixed;
}

} // namespace

double fd_oracle(FracKind kind, const std::function<double(double, double)>& u,
                 const std::function<double(double, double)>& v, int n)
{
  if (n < 8) throw std::invalid_argument("fd_oracle: grid must have n >= 8");
  if (kind == FracKind::tildeH12_edge)
    throw std::invalid_argument("fd_oracle: edge kind takes 1D data, use fd_oracle_edge");

  const double h = 1.0 / n;
  if (kind == FracKind::tildeH12_K) {
    // <grad w_u, grad w_v> over the cube, both solutions from Dirichlet data.
    const Eigen::VectorXd wu = extension_solution(kind, u, n);
    const Eigen::VectorXd wv = extension_solution(kind, v, n);
    Grid3 grid(n);
    Eigen::VectorXd avv(grid.size());
    grid.apply(wv, avv);
    return wu.dot(avv);
  }

  // Mixed (Neumann) kinds: solve for v and pair with u on the bottom face.
  const Eigen::VectorXd wv = extension_solution(kind, v, n);
  Grid3 grid(n);
  double sum = 0.0;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      sum += node_factor(i, n) * node_factor(j, n) * u(i * h, j * h) * wv(grid.idx(i, j, 0));
  return h * h * sum;
}

double fd_oracle_edge(const std::function<double(double)>& u,
                      const std::function<double(double)>& v, int n)
{
  if (n < 8) throw std::invalid_argument("fd_oracle_edge: grid must have n >= 8");
  const double h = 1.0 / n;
  const int nn = (n + 1) * (n + 1);
  auto idx = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<char> dirichlet(nn, 0);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      if (i == 0 || i == n || j == 0 || j == n) dirichlet[idx(i, j)] = 1;

  auto apply2 = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.setZero();
    for (int j = 0; j <= n; ++j) {
      const double bj = node_factor(j, n);
      for (int i = 0; i < n; ++i) {
        const double d = bj * (x(idx(i, j)) - x(idx(i + 1, j)));
        y(idx(i, j)) += d;
        y(idx(i + 1, j)) -= d;
      }
    }
    for (int i = 0; i <= n; ++i) {
      const double bi = node_factor(i, n);
      for (int j = 0; j < n; ++j) {
        const double d = bi * (x(idx(i, j)) - x(idx(i, j + 1)));
        y(idx(i, j)) += d;
        y(idx(i, j + 1)) -= d;
      }
    }
  };

  auto solve_dirichlet = [&](const std::function<double(double)>& g) {
    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(nn);
    for (int i = 1; i < n; ++i) fixed(idx(i, 0)) = g(i * h); // data on edge 1
    Eigen::VectorXd b(nn);
    apply2(fixed, b);
    b = -b;
    for (int m = 0; m < nn; ++m)
      if (dirichlet[m]) b(m) = 0.0;
    // diagonal preconditioner
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(nn);
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        double s = 0.0;
        if (i > 0) s += node_factor(j, n);
        if (i < n) s += node_factor(j, n);
        if (j > 0) s += node_factor(i, n);
        if (j < n) s += node_factor(i, n);
        diag(idx(i, j)) = s > 0 ? s : 1.0;
      }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nn), r = b;
    Eigen::VectorXd z = r.cwiseQuotient(diag);
    for (int m = 0; m < nn; ++m)
      if (dirichlet[m]) z(m) = 0.0;
    Eigen::VectorXd p = z, ap(nn);
    double rz = r.dot(z);
    const double b_norm = std::max(r.norm(), 1e-300);
    for (int it = 0; it < 80 * n + 2000; ++it) {
      if (r.norm() <= 1e-12 * b_norm) break;
      apply2(p, ap);
      for (int m = 0; m < nn; ++m)
        if (dirichlet[m]) ap(m) = 0.0;
      const double alpha = rz / p.dot(ap);
      x += alpha * p;
      r -= alpha * ap;
      z = r.cwiseQuotient(diag);
      for (int m = 0; m < nn; ++m)
        if (dirichlet[m]) z(m) = 0.0;
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    return Eigen::VectorXd(x + fixed);
  };

  const Eigen::VectorXd wu = solve_dirichlet(u);
  const Eigen::VectorXd wv = solve_dirichlet(v);
  Eigen::VectorXd avv(nn);
  apply2(wv, avv);
  return wu.dot(avv);
}

} // namespace hpbem
