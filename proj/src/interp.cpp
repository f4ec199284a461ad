// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/interp.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hpbem/quadrature.hpp"

namespace hpbem {

namespace {

constexpr double pi = 3.14159265358979323846;

int default_quad_points(int p) { return std::max(2 * p + 16, 32); }

//------------------------------------------------------------------------------
// Discrete splitting RT0_p = curl P0_p + (L^2-orthogonal complement)
//------------------------------------------------------------------------------

struct BubbleSplit {
  std::vector<RTFunction> bubbles;       // basis of RT0_p
  std::vector<TensorPolynomial> scalars; // basis of P0_p
  std::vector<RTFunction> curls;         // curl of the scalar bubbles
  Eigen::MatrixXd complement;            // orthonormal coefficient columns, p^2-1 of them
};

BubbleSplit bubble_split(int p)
{
  BubbleSplit split;
  split.bubbles = rt_bubble_basis(p);
  split.scalars = scalar_bubble_basis(p);
  for (const auto& phi : split.scalars) split.curls.push_back(scalar_curl(phi));
  const int nb = static_cast<int>(split.bubbles.size());
  if (nb == 0) return split;

  Eigen::MatrixXd q(rt_dimension(p), nb);
  for (int i = 0; i < nb; ++i) q.col(i) = rt_coefficients(split.bubbles[i]);
  Eigen::JacobiSVD<Eigen::MatrixXd> qsvd(q, Eigen::ComputeThinU);
  const Eigen::MatrixXd u = qsvd.matrixU(); // orthonormal basis of RT0_p

  const int nphi = static_cast<int>(split.curls.size());
  Eigen::MatrixXd w(rt_dimension(p), nphi);
  for (int i = 0; i < nphi; ++i) w.col(i) = rt_coefficients(split.curls[i]);
  const Eigen::MatrixXd w_hat = u.transpose() * w; // curls in bubble coordinates
  Eigen::JacobiSVD<Eigen::MatrixXd> wsvd(w_hat, Eigen::ComputeFullU);
  if (wsvd.rank() != nphi)
    throw std::runtime_error("bubble_split: curl P0_p is rank deficient");
  split.complement = u * wsvd.matrixU().rightCols(nb - nphi);
  return split;
}

//------------------------------------------------------------------------------
// Edge projection workspace
//------------------------------------------------------------------------------

struct EdgeWorkspace {
  Eigen::MatrixXd bubble_coeff; // (p+1) x (p-1), 1D bubble basis in Legendre coeffs
  Eigen::MatrixXd bubble_sine;  // M x (p-1), sine spectra of the bubbles
  Eigen::VectorXd weights;      // edge weights m*pi*coth(m*pi)
  Eigen::LDLT<Eigen::MatrixXd> gram;
};

EdgeWorkspace edge_workspace(int p, int truncation)
{
  EdgeWorkspace ws;
  ws.bubble_coeff = bubble_basis_coefficients(p);
  ws.bubble_sine = sine_transform_of_legendre(p, truncation) * ws.bubble_coeff;
  ws.weights = frac_weight_table(FracKind::tildeH12_edge, truncation).weights.col(0);
  const Eigen::MatrixXd g =
      ws.bubble_sine.transpose() * ws.weights.asDiagonal() * ws.bubble_sine;
  ws.gram.compute(g);
  return ws;
}

/// tilde H^{1/2}(l)-projection of a sine spectrum onto P0_p(l); returns the
/// projected polynomial's Legendre coefficients (degree p).
Eigen::VectorXd project_edge(const EdgeWorkspace& ws, const Eigen::VectorXd& psi_hat)
{
  if (ws.bubble_coeff.cols() == 0) return Eigen::VectorXd::Zero(ws.bubble_coeff.rows());
  const Eigen::VectorXd rhs =
      ws.bubble_sine.transpose() * ws.weights.asDiagonal() * psi_hat;
  return ws.bubble_coeff * ws.gram.solve(rhs);
}

//------------------------------------------------------------------------------
// Polynomial extensions from an edge into K
//------------------------------------------------------------------------------

Eigen::VectorXd blend_coefficients(ExtensionBlend blend)
{
  // (1-t) or (1-t)^2 in the orthonormal Legendre basis.
  if (blend == ExtensionBlend::linear) {
    Eigen::VectorXd b(2);
    b << 0.5, -0.5 / std::sqrt(3.0);
    return b;
  }
  Eigen::VectorXd b(3);
  b << 1.0 / 3.0, -std::sqrt(3.0) / 6.0, std::sqrt(5.0) / 30.0;
  return b;
}

TensorPolynomial blend_extension(int edge, const Eigen::VectorXd& q, ExtensionBlend blend, int p)
{
  return edge_blend_extension(edge, q, blend_coefficients(blend), p);
}

//------------------------------------------------------------------------------
// Quadrature helpers
//------------------------------------------------------------------------------

/// <f, g>_{L^2(K)} for an evaluator f against a polynomial g.
double quad_inner(const std::function<double(double, double)>& f, const TensorPolynomial& g,
                  const QuadratureRule& rule)
{
  const Eigen::MatrixXd gv = g.values(rule.points, rule.points);
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j)
      sum += rule.weights(i) * rule.weights(j) * f(rule.points(i), rule.points(j)) * gv(i, j);
  return sum;
}

struct GridValues {
  Eigen::MatrixXd v1, v2; // components on the tensor grid
};

GridValues tabulate(const VectorField& u, const QuadratureRule& rule)
{
  GridValues g;
  g.v1.resize(rule.size(), rule.size());
  g.v2.resize(rule.size(), rule.size());
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j) {
      const Eigen::Vector2d v = u.value(rule.points(i), rule.points(j));
      g.v1(i, j) = v(0);
      g.v2(i, j) = v(1);
    }
  return g;
}

double grid_inner(const GridValues& g, const RTFunction& w, const QuadratureRule& rule)
{
  const Eigen::MatrixXd w1 = w.component_1().values(rule.points, rule.points);
  const Eigen::MatrixXd w2 = w.component_2().values(rule.points, rule.points);
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j)
      sum += rule.weights(i) * rule.weights(j) * (g.v1(i, j) * w1(i, j) + g.v2(i, j) * w2(i, j));
  return sum;
}

//------------------------------------------------------------------------------
// tilde H^{-1/2} Gram of the P_p(K) basis (cached per degree and truncation)
//------------------------------------------------------------------------------

struct CosineGram {
  Eigen::MatrixXd transform; // (M+1) x (p+1) per direction
  Eigen::MatrixXd gram;      // (p+1)^2 square
  Eigen::LDLT<Eigen::MatrixXd> factor;
  double condition = 1.0;
};

const CosineGram& cosine_gram(int p, int truncation)
{
  static std::mutex mtx;
  static std::map<std::pair<int, int>, CosineGram> cache;
  std::lock_guard<std::mutex> lock(mtx);
  const auto key = std::make_pair(p, truncation);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  CosineGram cg;
  cg.transform = cosine_transform_of_legendre(p, truncation);
  const Eigen::MatrixXd w = frac_weight_table(FracKind::tildeHm12_K, truncation).weights;
  const int nb = p + 1;
  const int modes = truncation + 1;
  Eigen::MatrixXd b(modes * modes, nb * nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      const Eigen::MatrixXd outer = cg.transform.col(i) * cg.transform.col(j).transpose();
      b.col(i * nb + j) = Eigen::Map<const Eigen::VectorXd>(outer.data(), modes * modes);
    }
  Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), modes * modes);
  cg.gram = b.transpose() * wv.asDiagonal() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cg.gram);
  const double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  cg.condition = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (cg.condition > 1e12)
    throw std::runtime_error("proj_tildeHm12: Gram matrix conditioning beyond 1e12");
  cg.factor.compute(cg.gram);
  return cache.emplace(key, std::move(cg)).first->second;
}

TensorPolynomial proj_tildeHm12_spectrum(const ModeSpectrum& sf, int p, int truncation)
{
  const CosineGram& cg = cosine_gram(p, truncation);
  const Eigen::MatrixXd w = frac_weight_table(FracKind::tildeHm12_K, truncation).weights;
  const Eigen::MatrixXd rhs_mat =
      cg.transform.transpose() * w.cwiseProduct(sf.coeff) * cg.transform;
  const int nb = p + 1;
  Eigen::VectorXd rhs(nb * nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) rhs(i * nb + j) = rhs_mat(i, j);
  const Eigen::VectorXd c = cg.factor.solve(rhs);
  Eigen::MatrixXd coeff(nb, nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) coeff(i, j) = c(i * nb + j);
  return TensorPolynomial(std::move(coeff));
}

} // namespace

//------------------------------------------------------------------------------
// Projections
//------------------------------------------------------------------------------

TensorPolynomial proj_L2(const TensorPolynomial& f, int p)
{
  if (p < 0) throw std::invalid_argument("proj_L2: negative degree");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p + 1, p + 1);
  const int r = std::min(p + 1, f.degree_1() + 1);
  const int s = std::min(p + 1, f.degree_2() + 1);
  c.topLeftCorner(r, s) = f.coeff().topLeftCorner(r, s);
  return TensorPolynomial(std::move(c));
}

TensorPolynomial proj_L2(const std::function<double(double, double)>& f, int p, int quad_points)
{
  if (p < 0) throw std::invalid_argument("proj_L2: negative degree");
  if (quad_points < 0) quad_points = default_quad_points(p);
  const QuadratureRule rule = gauss_legendre(quad_points);
  Eigen::MatrixXd values(rule.size(), rule.size());
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j) values(i, j) = f(rule.points(i), rule.points(j));
  const Eigen::MatrixXd leg = legendre_values(p, rule.points);
  const Eigen::MatrixXd wl = rule.weights.asDiagonal() * leg;
  return TensorPolynomial(wl.transpose() * values * wl);
}

TensorPolynomial proj_tildeHm12(const TensorPolynomial& f, int p, int truncation)
{
  if (f.degree_1() <= p && f.degree_2() <= p) return proj_L2(f, p); // idempotency, exactly
  return proj_tildeHm12_spectrum(expand(f, ModeKind::cosine, truncation), p, truncation);
}

TensorPolynomial proj_tildeHm12(const std::function<double(double, double)>& f, int p,
                                int truncation)
{
  return proj_tildeHm12_spectrum(expand(f, ModeKind::cosine, truncation), p, truncation);
}

//------------------------------------------------------------------------------
// H^1-conforming interpolation
//------------------------------------------------------------------------------

TensorPolynomial interp_H1(const std::function<double(double, double)>& f, int p, int truncation,
                           ExtensionBlend blend, int quad_points)
{
  if (p < 1) throw std::invalid_argument("interp_H1: p must be >= 1");
  if (quad_points < 0) quad_points = default_quad_points(p);

  // Vertex part: bilinear interpolant of the corner values.
  Eigen::VectorXd ell0(2), ell1(2);
  ell0 << 0.5, -0.5 / std::sqrt(3.0);
  ell1 << 0.5, 0.5 / std::sqrt(3.0);
  TensorPolynomial q1(1, 1);
  for (int c = 0; c < 4; ++c) {
    const Eigen::Vector2d x = corner_point(c);
    const Eigen::VectorXd& b1 = (x(0) > 0.5) ? ell1 : ell0;
    const Eigen::VectorXd& b2 = (x(1) > 0.5) ? ell1 : ell0;
    q1.coeff() += f(x(0), x(1)) * (b1 * b2.transpose());
  }
  TensorPolynomial result = q1.embedded(p, p);

  // Edge parts: project the vertex-corrected traces in tilde H^{1/2}(l).
  if (p >= 2) {
    const EdgeWorkspace ws = edge_workspace(p, truncation);
    for (int edge = 1; edge <= 4; ++edge) {
      auto rem = [&](double s) {
        const Eigen::Vector2d x = edge_point(edge, s);
        return f(x(0), x(1)) - q1(x(0), x(1));
      };
      const EdgeModeSpectrum psi = edge_expand(rem, edge, truncation);
      const Eigen::VectorXd q = project_edge(ws, psi.coeff);
      result = result + blend_extension(edge, q, blend, p);
    }
  }

  // Interior part: H^1-seminorm projection of the defect onto P0_p(K).
  const auto scalars = scalar_bubble_basis(p);
  const int nphi = static_cast<int>(scalars.size());
  if (nphi > 0) {
    const QuadratureRule rule = gauss_legendre(quad_points);
    Eigen::MatrixXd gram(nphi, nphi);
    Eigen::VectorXd rhs(nphi);
    std::vector<TensorPolynomial> d1, d2;
    for (const auto& chi : scalars) {
      d1.push_back(chi.derivative_1());
      d2.push_back(chi.derivative_2());
    }
    for (int i = 0; i < nphi; ++i)
      for (int j = 0; j <= i; ++j) {
        gram(i, j) = l2_inner(d1[i], d1[j]) + l2_inner(d2[i], d2[j]);
        gram(j, i) = gram(i, j);
      }
    const TensorPolynomial r1 = result.derivative_1(), r2 = result.derivative_2();
    for (int i = 0; i < nphi; ++i) {
      // <grad f, grad chi> = int_dK f dchi/dn - int_K f (Lap chi).
      const TensorPolynomial lap = d1[i].derivative_1() + d2[i].derivative_2();
      double value = -quad_inner(f, lap, rule);
      for (int edge = 1; edge <= 4; ++edge) {
        const Eigen::Vector2d n = edge_normal(edge);
        for (int qq = 0; qq < rule.size(); ++qq) {
          const Eigen::Vector2d x = edge_point(edge, rule.points(qq));
          const double dn = n(0) * d1[i](x(0), x(1)) + n(1) * d2[i](x(0), x(1));
          value += rule.weights(qq) * f(x(0), x(1)) * dn;
        }
      }
      value -= l2_inner(r1, d1[i]) + l2_inner(r2, d2[i]);
      rhs(i) = value;
    }
    const Eigen::VectorXd c = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);
    for (int i = 0; i < nphi; ++i) result = result + c(i) * scalars[i];
  }
  return result;
}

//------------------------------------------------------------------------------
// H(div)-conforming projection-based interpolation
//------------------------------------------------------------------------------

BoundaryPrimitive boundary_primitive(const VectorField& u, const RTFunction& u1, int truncation)
{
  const int p = u1.order();
  const int n_edge = std::max(2 * p + 16, 2 * truncation + 8);
  const QuadratureRule rule = gauss_legendre(n_edge);
  BoundaryPrimitive bp;
  for (int edge = 1; edge <= 4; ++edge) {
    const EdgePolynomial tr = u1.normal_trace(edge);
    const Eigen::Vector2d n = edge_normal(edge);
    auto g = [&u, tr, n, edge](double s) {
      const Eigen::Vector2d x = edge_point(edge, s);
      return u.value(x(0), x(1)).dot(n) - tr(s);
    };
    Eigen::VectorXd gv(rule.size());
    for (int q = 0; q < rule.size(); ++q) gv(q) = g(rule.points(q));
    bp.vertex_defect[edge - 1] = std::abs(rule.weights.dot(gv));

    // <psi, sqrt2 sin(m pi s)> = sqrt2/(m pi) * int cos(m pi s) g(s) ds,
    // using psi(0) = psi(1) = 0.
    Eigen::VectorXd psi_hat(truncation);
    for (int m = 1; m <= truncation; ++m) {
      double sum = 0.0;
      for (int q = 0; q < rule.size(); ++q)
        sum += rule.weights(q) * std::cos(m * pi * rule.points(q)) * gv(q);
      psi_hat(m - 1) = std::sqrt(2.0) / (m * pi) * sum;
    }
    bp.psi_spectrum[edge - 1] = EdgeModeSpectrum{edge, psi_hat};
    bp.psi[edge - 1] = [g, n_edge](double s) {
      if (s <= 0.0) return 0.0;
      const QuadratureRule r = gauss_legendre(n_edge);
      double sum = 0.0;
      for (int q = 0; q < r.size(); ++q) sum += s * r.weights(q) * g(s * r.points(q));
      return sum;
    };
  }
  return bp;
}

namespace {

InterpolantBreakdown interp_div_core(const VectorField& u, int p, int truncation,
                                     ExtensionBlend blend, int quad_points, bool tilde)
{
  if (p < 1) throw std::invalid_argument("interp_div: p must be >= 1");
  if (!u.value || !u.divergence)
    throw std::invalid_argument("interp_div: field must provide value and divergence");
  if (quad_points < 0) quad_points = default_quad_points(p);

  // (1) lowest-order interpolant from the edge fluxes
  const int n_edge = std::max(2 * p + 16, 2 * truncation + 8);
  const QuadratureRule erule = gauss_legendre(n_edge);
  const auto rt1 = rt_edge_basis(1);
  std::array<double, 4> flux{};
  double flux_scale = 1.0;
  for (int edge = 1; edge <= 4; ++edge) {
    double f = 0.0;
    const Eigen::Vector2d n = edge_normal(edge);
    for (int q = 0; q < erule.size(); ++q) {
      const Eigen::Vector2d x = edge_point(edge, erule.points(q));
      f += erule.weights(q) * u.value(x(0), x(1)).dot(n);
    }
    flux[edge - 1] = f;
    flux_scale += std::abs(f);
  }
  RTFunction u1(p);
  for (int edge = 1; edge <= 4; ++edge)
    u1 = u1 + flux[edge - 1] * rt1[edge - 1].embedded(p);

  // (2) boundary primitive and edge projections
  const BoundaryPrimitive bp = boundary_primitive(u, u1, truncation);
  for (int edge = 0; edge < 4; ++edge)
    if (bp.vertex_defect[edge] > 1e-10 * flux_scale)
      throw std::runtime_error("interp_div: unresolved edge-flux quadrature (vertex defect)");

  RTFunction u2(p);
  if (p >= 2) {
    const EdgeWorkspace ws = edge_workspace(p, truncation);
    for (int edge = 1; edge <= 4; ++edge) {
      const Eigen::VectorXd q = project_edge(ws, bp.psi_spectrum[edge - 1].coeff);
      u2 = u2 + scalar_curl(blend_extension(edge, q, blend, p));
    }
  }

  // (3) interior bubble part
  InterpolantBreakdown out{u1, u2, RTFunction(p), RTFunction(p), 1.0};
  const BubbleSplit split = bubble_split(p);
  const int na = static_cast<int>(split.complement.cols());
  const int nb = static_cast<int>(split.curls.size());
  if (na + nb > 0) {
    std::vector<RTFunction> comp;
    for (int i = 0; i < na; ++i)
      comp.push_back(rt_from_coefficients(p, split.complement.col(i)));

    const QuadratureRule rule = gauss_legendre(quad_points);
    const GridValues uv = tabulate(u, rule);
    const double c1 = flux[0] + flux[1] + flux[2] + flux[3]; // div u1 (constant)

    Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(na + nb, na + nb);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(na + nb);

    // divergence equations, tested with the complement basis
    if (na > 0) {
      std::vector<TensorPolynomial> divs;
      for (const auto& v : comp) divs.push_back(v.divergence());
      if (tilde) {
        const ModeSpectrum sdiv = expand(u.divergence, ModeKind::cosine, truncation);
        const Eigen::MatrixXd w = frac_weight_table(FracKind::tildeHm12_K, truncation).weights;
        std::vector<ModeSpectrum> sdivs;
        for (const auto& d : divs) sdivs.push_back(expand(d, ModeKind::cosine, truncation));
        for (int i = 0; i < na; ++i) {
          for (int j = 0; j < na; ++j)
            lhs(i, j) = sdivs[i].coeff.cwiseProduct(sdivs[j].coeff).cwiseProduct(w).sum();
          rhs(i) = sdiv.coeff.cwiseProduct(sdivs[i].coeff).cwiseProduct(w).sum() -
                   c1 * sdivs[i].coeff(0, 0); // div u1 pairs through the (0,0) mode only
        }
      } else {
        for (int i = 0; i < na; ++i) {
          for (int j = 0; j < na; ++j) lhs(i, j) = l2_inner(divs[i], divs[j]);
          double udiv = 0.0;
          const Eigen::MatrixXd dv = divs[i].values(rule.points, rule.points);
          for (int a = 0; a < rule.size(); ++a)
            for (int b = 0; b < rule.size(); ++b)
              udiv += rule.weights(a) * rule.weights(b) *
                      u.divergence(rule.points(a), rule.points(b)) * dv(a, b);
          rhs(i) = udiv - c1 * divs[i].mean();
        }
      }
    }

    // rotation equations, tested with curl P0_p
    for (int i = 0; i < nb; ++i) {
      const RTFunction& cphi = split.curls[i];
      for (int j = 0; j < na; ++j) lhs(na + i, j) = l2_inner(comp[j], cphi);
      for (int j = 0; j < nb; ++j) lhs(na + i, na + j) = l2_inner(split.curls[j], cphi);
      rhs(na + i) = grid_inner(uv, cphi, rule) - l2_inner(u1, cphi) - l2_inner(u2, cphi);
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    out.interior_rcond = lu.rcond();
    if (!(out.interior_rcond > 1e-14))
      throw std::runtime_error("interp_div: interior saddle system is degenerate");
    const Eigen::VectorXd sol = lu.solve(rhs);
    RTFunction u3(p);
    for (int i = 0; i < na; ++i) u3 = u3 + sol(i) * comp[i];
    for (int i = 0; i < nb; ++i) u3 = u3 + sol(na + i) * split.curls[i];
    out.u3p = u3;
  }

  out.total = out.u1 + out.u2p + out.u3p;
  return out;
}

} // namespace

InterpolantBreakdown interp_div_l2(const VectorField& u, int p, int truncation,
                                   ExtensionBlend blend, int quad_points)
{
  return interp_div_core(u, p, truncation, blend, quad_points, false);
}

InterpolantBreakdown interp_div_m12(const VectorField& u, int p, int truncation,
                                    ExtensionBlend blend, int quad_points)
{
  return interp_div_core(u, p, truncation, blend, quad_points, true);
}

//------------------------------------------------------------------------------
// Inf-sup constant
//------------------------------------------------------------------------------

double infsup_closed_form(int p)
{
  return std::sqrt(2.0 * (2.0 * p + 1.0) / ((p + 1.0) * (p + 2.0)));
}

InfSupReport infsup_constant(int p)
{
  if (p < 1) throw std::invalid_argument("infsup_constant: p must be >= 1");
  InfSupReport report;
  report.p = p;
  report.closed_form = infsup_closed_form(p);
  if (p == 1) {
    report.trivial_space = true;
    return report;
  }

  const BubbleSplit split = bubble_split(p);
  const int nbub = static_cast<int>(split.bubbles.size());
  Eigen::MatrixXd q(rt_dimension(p), nbub);
  for (int i = 0; i < nbub; ++i) q.col(i) = rt_coefficients(split.bubbles[i]);
  Eigen::JacobiSVD<Eigen::MatrixXd> qsvd(q, Eigen::ComputeThinU);
  const Eigen::MatrixXd ua = qsvd.matrixU();
  report.dim_A = static_cast<int>(ua.cols());

  const int nphi = static_cast<int>(split.curls.size());
  Eigen::MatrixXd bmat(rt_dimension(p), nphi + nbub);
  for (int i = 0; i < nphi; ++i) bmat.col(i) = rt_coefficients(split.curls[i]);
  for (int i = 0; i < nbub; ++i) {
    const TensorPolynomial d = split.bubbles[i].divergence();
    const RTFunction grad(d.derivative_1().embedded(p, p - 1), d.derivative_2().embedded(p - 1, p));
    bmat.col(nphi + i) = rt_coefficients(grad);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> bsvd(bmat, Eigen::ComputeThinU);
  bsvd.setThreshold(1e-10);
  const int rank = static_cast<int>(bsvd.rank());
  const Eigen::MatrixXd ub = bsvd.matrixU().leftCols(rank);
  report.dim_B = rank;

  const Eigen::MatrixXd coupling = ub.transpose() * ua;
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(coupling);
  report.computed = csvd.singularValues().minCoeff();
  return report;
}

//------------------------------------------------------------------------------
// Stability scan
//------------------------------------------------------------------------------

std::vector<StabilityRow> stability_scan(const VectorField& u, int p_min, int p_max,
                                         int truncation)
{
  if (p_min < 1 || p_max < p_min) throw std::invalid_argument("stability_scan: bad degree range");
  std::vector<StabilityRow> rows;
  for (int p = p_min; p <= p_max; ++p) {
    const InterpolantBreakdown b = interp_div_m12(u, p, truncation);
    StabilityRow row;
    row.p = p;
    row.l2_norm = b.total.l2_norm();
    row.div_norm = norm_tildeHm12_K(expand(b.total.divergence(), ModeKind::cosine, truncation));
    row.total = row.l2_norm + row.div_norm;
    rows.push_back(row);
  }
  return rows;
}

double fit_loglog_slope(const std::vector<StabilityRow>& rows)
{
  if (rows.size() < 2) throw std::invalid_argument("fit_loglog_slope: need at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.p));
    const double y = std::log(std::max(r.total, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace hpbem
