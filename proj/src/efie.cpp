// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/efie.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hpbem/quadrature.hpp"

namespace hpbem {

namespace {

constexpr double pi = 3.14159265358979323846;

//------------------------------------------------------------------------------
// Reference-square symmetries (dihedral group), used to normalize singular pairs
//------------------------------------------------------------------------------

struct Symmetry {
  Eigen::Matrix2d a;
  Eigen::Vector2d b;

  Eigen::Vector2d operator()(const Eigen::Vector2d& xi) const { return a * xi + b; }
};

const std::array<Symmetry, 8>& square_symmetries()
{
  static const std::array<Symmetry, 8> syms = [] {
    std::array<Symmetry, 8> s;
    const double rot[4][4] = {{1, 0, 0, 1}, {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0}};
    const double mir[4][4] = {{-1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, 1, 0}, {0, -1, -1, 0}};
    const Eigen::Vector2d center(0.5, 0.5);
    for (int i = 0; i < 4; ++i) {
      s[i].a << rot[i][0], rot[i][1], rot[i][2], rot[i][3];
      s[i].b = center - s[i].a * center;
      s[4 + i].a << mir[i][0], mir[i][1], mir[i][2], mir[i][3];
      s[4 + i].b = center - s[4 + i].a * center;
    }
    return s;
  }();
  return syms;
}

/// Symmetry mapping the directed segment from -> to (reference corners).
Symmetry symmetry_for_edge(const Eigen::Vector2d& from, const Eigen::Vector2d& to)
{
  for (const auto& s : square_symmetries())
    if ((s(Eigen::Vector2d(0, 0)) - from).norm() < 1e-12 &&
        (s(Eigen::Vector2d(1, 0)) - to).norm() < 1e-12)
      return s;
  throw std::logic_error("symmetry_for_edge: no symmetry found");
}

Symmetry symmetry_for_corner(const Eigen::Vector2d& corner)
{
  for (const auto& s : square_symmetries())
    if ((s(Eigen::Vector2d(0, 0)) - corner).norm() < 1e-12) return s;
  throw std::logic_error("symmetry_for_corner: no symmetry found");
}

//------------------------------------------------------------------------------
// Regularized quadrature rules on K x K (normalized frames)
//------------------------------------------------------------------------------

struct QPoint {
  Eigen::Vector2d xi;
  Eigen::Vector2d eta;
  double w;
};

// Identical panels: eta = xi + u; the u integral is split into the eight
// octant triangles around the origin and straightened with a Duffy map, which
// cancels the 1/r kernel singularity. Octants (not quadrant-sized triangles)
// keep the overlap factors 1-|u_i| polynomial on every panel.
std::vector<QPoint> identical_rule(int q)
{
  const QuadratureRule g = gauss_legendre(q);
  std::vector<QPoint> pts;
  pts.reserve(8 * q * q * q * q);
  // u = (oct0 * t + oct1 * t*s, oct2 * t*s + oct3 * t): eight octants
  const int octant[8][4] = {{1, 0, 1, 0},  {1, 0, -1, 0},  {-1, 0, 1, 0}, {-1, 0, -1, 0},
                            {0, 1, 0, 1},  {0, -1, 0, 1},  {0, 1, 0, -1}, {0, -1, 0, -1}};
  for (const auto& oct : octant)
    for (int it = 0; it < q; ++it)
      for (int is = 0; is < q; ++is) {
        const double t = g.points(it);
        const double s = g.points(is);
        const Eigen::Vector2d u(oct[0] * t + oct[1] * t * s, oct[2] * t * s + oct[3] * t);
        const double jac = t * g.weights(it) * g.weights(is);
        const double lo1 = std::max(0.0, -u(0)), len1 = 1.0 - std::abs(u(0));
        const double lo2 = std::max(0.0, -u(1)), len2 = 1.0 - std::abs(u(1));
        if (len1 <= 0.0 || len2 <= 0.0) continue;
        for (int ia = 0; ia < q; ++ia)
          for (int ib = 0; ib < q; ++ib) {
            QPoint p;
            p.xi = {lo1 + len1 * g.points(ia), lo2 + len2 * g.points(ib)};
            p.eta = p.xi + u;
            p.w = jac * len1 * len2 * g.weights(ia) * g.weights(ib);
            pts.push_back(p);
          }
      }
  return pts;
}

// Common edge (normalized: both charts share the bottom edge with matching
// parametrization). Coordinates (w, z, v) = (eta1 - xi1, xi2, eta2) vanish on
// the singular manifold; the box is split into six pyramids (largest
// coordinate, with w kept signed per panel) and straightened with Duffy maps.
std::vector<QPoint> edge_rule(int q)
{
  const QuadratureRule g = gauss_legendre(q);
  std::vector<QPoint> pts;
  pts.reserve(6 * q * q * q * q);
  for (int dir = 0; dir < 6; ++dir)
    for (int it = 0; it < q; ++it)
      for (int i1 = 0; i1 < q; ++i1)
        for (int i2 = 0; i2 < q; ++i2) {
          const double t = g.points(it);
          const double s1 = g.points(i1), s2 = g.points(i2);
          double w, z, v;
          switch (dir) {
            case 0: z = t, w = t * s1, v = t * s2; break;  // z largest, w >= 0
            case 1: z = t, w = -t * s1, v = t * s2; break; // z largest, w <= 0
            case 2: v = t, w = t * s1, z = t * s2; break;
            case 3: v = t, w = -t * s1, z = t * s2; break;
            case 4: w = t, z = t * s1, v = t * s2; break;
            default: w = -t, z = t * s1, v = t * s2; break;
          }
          const double jac = t * t;
          const double lo = std::max(0.0, -w), len = 1.0 - std::abs(w);
          if (len <= 0.0) continue;
          const double base = jac * g.weights(it) * g.weights(i1) * g.weights(i2);
          for (int ia = 0; ia < q; ++ia) {
            QPoint p;
            const double x1 = lo + len * g.points(ia);
            p.xi = {x1, z};
            p.eta = {x1 + w, v};
            p.w = base * len * g.weights(ia);
            pts.push_back(p);
          }
        }
  return pts;
}

// Common vertex (normalized: both charts have the shared vertex at the origin).
// The 4D corner singularity is removed by one Duffy map per choice of the
// largest coordinate.
std::vector<QPoint> vertex_rule(int q)
{
  const QuadratureRule g = gauss_legendre(q);
  std::vector<QPoint> pts;
  pts.reserve(4 * q * q * q * q);
  for (int dir = 0; dir < 4; ++dir)
    for (int it = 0; it < q; ++it)
      for (int i1 = 0; i1 < q; ++i1)
        for (int i2 = 0; i2 < q; ++i2)
          for (int i3 = 0; i3 < q; ++i3) {
            const double t = g.points(it);
            const double s1 = g.points(i1), s2 = g.points(i2), s3 = g.points(i3);
            double c[4] = {t, t * s1, t * s2, t * s3};
            // rotate so that coordinate `dir` carries the full length t
            std::swap(c[0], c[dir]);
            QPoint p;
            p.xi = {c[0], c[1]};
            p.eta = {c[2], c[3]};
            p.w = t * t * t * g.weights(it) * g.weights(i1) * g.weights(i2) * g.weights(i3);
            pts.push_back(p);
          }
  return pts;
}

std::vector<QPoint> far_rule(int q)
{
  const QuadratureRule g = gauss_legendre(q);
  std::vector<QPoint> pts;
  pts.reserve(q * q * q * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) {
          QPoint p;
          p.xi = {g.points(a), g.points(b)};
          p.eta = {g.points(c), g.points(d)};
          p.w = g.weights(a) * g.weights(b) * g.weights(c) * g.weights(d);
          pts.push_back(p);
        }
  return pts;
}

//------------------------------------------------------------------------------
// Pair classification and assembly
//------------------------------------------------------------------------------

enum class PairClass { identical, shared_edge, shared_vertex, disjoint };

struct PairGeometry {
  PairClass cls;
  Symmetry map_a, map_b;
};

PairGeometry classify_pair(const QuadMesh& mesh, int ea, int eb)
{
  PairGeometry geo;
  geo.map_a = geo.map_b = square_symmetries()[0];
  if (ea == eb) {
    geo.cls = PairClass::identical;
    return geo;
  }
  // shared mesh edge?
  for (int le = 0; le < 4; ++le) {
    const int ge = mesh.element_edges[ea][le];
    for (const auto& side : mesh.edges[ge].sides)
      if (side.element == eb) {
        const MeshEdge& edge = mesh.edges[ge];
        // Both normalized charts must run along the canonical direction v0->v1.
        auto directed = [&](int el, int ledge) {
          const int start = mesh.element_nodes[el][ledge - 1];
          const Eigen::Vector2d c0 = corner_point(ledge - 1);
          const Eigen::Vector2d c1 = corner_point(ledge % 4);
          return (start == edge.v0) ? symmetry_for_edge(c0, c1) : symmetry_for_edge(c1, c0);
        };
        for (const auto& sa : edge.sides)
          if (sa.element == ea) geo.map_a = directed(ea, sa.local_edge);
        geo.map_b = directed(eb, side.local_edge);
        geo.cls = PairClass::shared_edge;
        return geo;
      }
  }
  // shared vertex?
  for (int ca = 0; ca < 4; ++ca)
    for (int cb = 0; cb < 4; ++cb)
      if (mesh.element_nodes[ea][ca] == mesh.element_nodes[eb][cb]) {
        geo.cls = PairClass::shared_vertex;
        geo.map_a = symmetry_for_corner(corner_point(ca));
        geo.map_b = symmetry_for_corner(corner_point(cb));
        return geo;
      }
  geo.cls = PairClass::disjoint;
  return geo;
}

struct BasisData {
  // reference values and divergences of the local basis at a point
  Eigen::MatrixXd vals; // nloc x 2
  Eigen::VectorXd divs; // nloc
};

void evaluate_basis(const std::vector<RTFunction>& basis, const std::vector<TensorPolynomial>& divs,
                    double x1, double x2, BasisData& out)
{
  const int nloc = static_cast<int>(basis.size());
  out.vals.resize(nloc, 2);
  out.divs.resize(nloc);
  for (int i = 0; i < nloc; ++i) {
    out.vals.row(i) = basis[i](x1, x2).transpose();
    out.divs(i) = divs[i](x1, x2);
  }
}

// Per-pair kernel sweep producing the two local blocks
//   D(m,n) = int int G div phi_m(xi) div phi_n(eta)
//   F(m,n) = int int G (DT_a phi_m)(xi) . (DT_b phi_n)(eta)
void pair_blocks(const GlobalRTSpace& space, const std::vector<TensorPolynomial>& divs, int ea,
                 int eb, const std::vector<QPoint>& pts, const Symmetry& map_a,
                 const Symmetry& map_b, double k, Eigen::MatrixXcd& dblock,
                 Eigen::MatrixXcd& fblock)
{
  const auto& basis = space.local_basis();
  const Chart& ca = space.mesh().charts[ea];
  const Chart& cb = space.mesh().charts[eb];
  const int nloc = static_cast<int>(basis.size());
  dblock.setZero(nloc, nloc);
  fblock.setZero(nloc, nloc);
  BasisData da, db;
  Eigen::MatrixXd pa(nloc, 3), pb(nloc, 3);
  for (const QPoint& p : pts) {
    const Eigen::Vector2d xi = map_a(p.xi);
    const Eigen::Vector2d eta = map_b(p.eta);
    const Eigen::Vector3d x = ca.map(xi(0), xi(1));
    const Eigen::Vector3d y = cb.map(eta(0), eta(1));
    const double r = (x - y).norm();
    if (r < 1e-15) continue;
    std::complex<double> g;
    if (k == 0.0)
      g = 1.0 / (4.0 * pi * r);
    else
      g = std::exp(std::complex<double>(0.0, k * r)) / (4.0 * pi * r);
    g *= p.w;

    evaluate_basis(basis, divs, xi(0), xi(1), da);
    evaluate_basis(basis, divs, eta(0), eta(1), db);
    for (int m = 0; m < nloc; ++m)
      pa.row(m) = ca.push_raw(xi(0), xi(1), da.vals.row(m).transpose()).transpose();
    for (int n = 0; n < nloc; ++n)
      pb.row(n) = cb.push_raw(eta(0), eta(1), db.vals.row(n).transpose()).transpose();

    dblock += g * (da.divs * db.divs.transpose());
    fblock += g * (pa * pb.transpose());
  }
}

template <typename Scatter>
void sweep_pairs(const GlobalRTSpace& space, double k, int quad_order, AssemblyInfo* info,
                 Scatter&& scatter)
{
  const int p = space.degree();
  if (quad_order < p + 1)
    throw std::invalid_argument("efie: quadrature order must be at least p+1");
  const auto t0 = std::chrono::steady_clock::now();

  const std::vector<QPoint> rid = identical_rule(quad_order);
  const std::vector<QPoint> red = edge_rule(quad_order);
  const std::vector<QPoint> rvx = vertex_rule(quad_order);
  const std::vector<QPoint> rfar = far_rule(quad_order);

  std::vector<TensorPolynomial> divs;
  for (const auto& b : space.local_basis()) divs.push_back(b.divergence());

  AssemblyInfo local_info;
  local_info.quad_order = quad_order;
  const int ne = space.mesh().n_elements();
  Eigen::MatrixXcd dblock, fblock;
  for (int ea = 0; ea < ne; ++ea)
    for (int eb = 0; eb < ne; ++eb) {
      const PairGeometry geo = classify_pair(space.mesh(), ea, eb);
      const std::vector<QPoint>* pts = nullptr;
      switch (geo.cls) {
        case PairClass::identical: pts = &rid; ++local_info.n_identical; break;
        case PairClass::shared_edge: pts = &red; ++local_info.n_edge; break;
        case PairClass::shared_vertex: pts = &rvx; ++local_info.n_vertex; break;
        case PairClass::disjoint: pts = &rfar; ++local_info.n_far; break;
      }
      pair_blocks(space, divs, ea, eb, *pts, geo.map_a, geo.map_b, k, dblock, fblock);
      scatter(ea, eb, dblock, fblock);
    }
  local_info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (info) *info = local_info;
}

} // namespace

void WaveContext::validate() const
{
  if (!(k > 0.0)) throw std::invalid_argument("WaveContext: wave number must be positive");
  if (std::abs(direction.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("WaveContext: direction must be a unit vector");
  if (std::abs(direction.dot(polarization)) > 1e-10 * (1.0 + polarization.norm()))
    throw std::invalid_argument("WaveContext: polarization must be orthogonal to direction");
}

Eigen::MatrixXcd efie_matrix(const GlobalRTSpace& space, double k, int quad_order,
                             AssemblyInfo* info)
{
  if (k < 0.0) throw std::invalid_argument("efie_matrix: wave number must be nonnegative");
  const int n = space.dimension();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  const std::complex<double> kk(k * k, 0.0);
  sweep_pairs(space, k, quad_order, info,
              [&](int ea, int eb, const Eigen::MatrixXcd& d, const Eigen::MatrixXcd& f) {
                for (int i = 0; i < space.local_dimension(); ++i) {
                  const GlobalDof di = space.dof(ea, i);
                  if (di.index < 0) continue;
                  for (int j = 0; j < space.local_dimension(); ++j) {
                    const GlobalDof dj = space.dof(eb, j);
                    if (dj.index < 0) continue;
                    a(di.index, dj.index) += di.sign * dj.sign * (d(i, j) - kk * f(i, j));
                  }
                }
              });
  return a;
}

SingleLayerBlocks single_layer_blocks(const GlobalRTSpace& space, int quad_order)
{
  const int n = space.dimension();
  SingleLayerBlocks blocks;
  blocks.div_block = Eigen::MatrixXd::Zero(n, n);
  blocks.field_block = Eigen::MatrixXd::Zero(n, n);
  sweep_pairs(space, 0.0, quad_order, nullptr,
              [&](int ea, int eb, const Eigen::MatrixXcd& d, const Eigen::MatrixXcd& f) {
                for (int i = 0; i < space.local_dimension(); ++i) {
                  const GlobalDof di = space.dof(ea, i);
                  if (di.index < 0) continue;
                  for (int j = 0; j < space.local_dimension(); ++j) {
                    const GlobalDof dj = space.dof(eb, j);
                    if (dj.index < 0) continue;
                    const double s = di.sign * dj.sign;
                    blocks.div_block(di.index, dj.index) += s * d(i, j).real();
                    blocks.field_block(di.index, dj.index) += s * f(i, j).real();
                  }
                }
              });
  return blocks;
}

Eigen::MatrixXd energy_matrix(const GlobalRTSpace& space, int quad_order)
{
  const SingleLayerBlocks blocks = single_layer_blocks(space, quad_order);
  return blocks.div_block + blocks.field_block;
}

double energy_surrogate(const Eigen::VectorXcd& coeffs, const Eigen::MatrixXd& energy_gram)
{
  const Eigen::VectorXd re = coeffs.real(), im = coeffs.imag();
  const double q = re.dot(energy_gram * re) + im.dot(energy_gram * im);
  return std::sqrt(std::max(q, 0.0));
}

Eigen::VectorXcd rhs_plane_wave(const GlobalRTSpace& space, const WaveContext& wave,
                                int quad_order)
{
  wave.validate();
  const int p = space.degree();
  if (quad_order < p + 1)
    throw std::invalid_argument("rhs_plane_wave: quadrature order must be at least p+1");
  const QuadratureRule g = gauss_legendre(quad_order + 2);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(space.dimension());
  const auto& basis = space.local_basis();
  for (int el = 0; el < space.mesh().n_elements(); ++el) {
    const Chart& chart = space.mesh().charts[el];
    Eigen::VectorXcd local = Eigen::VectorXcd::Zero(space.local_dimension());
    for (int a = 0; a < g.size(); ++a)
      for (int c = 0; c < g.size(); ++c) {
        const double x1 = g.points(a), x2 = g.points(c);
        const double w = g.weights(a) * g.weights(c);
        const Eigen::Vector3d x = chart.map(x1, x2);
        const std::complex<double> phase =
            std::exp(std::complex<double>(0.0, wave.k * wave.direction.dot(x)));
        for (int i = 0; i < space.local_dimension(); ++i) {
          const Eigen::Vector3d v = chart.push_raw(x1, x2, basis[i](x1, x2));
          local(i) += w * phase * wave.polarization.dot(v);
        }
      }
    for (int i = 0; i < space.local_dimension(); ++i) {
      const GlobalDof d = space.dof(el, i);
      if (d.index >= 0) b(d.index) += d.sign * local(i);
    }
  }
  return b;
}

GalerkinSystem assemble(const GlobalRTSpace& space, const WaveContext& wave, int quad_order)
{
  wave.validate();
  if (quad_order < 0) quad_order = space.degree() + 3;
  GalerkinSystem sys;
  sys.matrix = efie_matrix(space, wave.k, quad_order, &sys.info);
  sys.rhs = rhs_plane_wave(space, wave, quad_order);
  return sys;
}

SolveResult solve(const GalerkinSystem& system, int dense_limit)
{
  SolveResult res;
  const int n = static_cast<int>(system.matrix.rows());
  if (n > dense_limit)
    throw std::invalid_argument("solve: system exceeds the configured dense limit");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system.matrix);
  res.solution = lu.solve(system.rhs);
  const double bnorm = std::max(system.rhs.norm(), 1e-300);
  res.residual = (system.matrix * res.solution - system.rhs).norm() / bnorm;
  res.ok = std::isfinite(res.residual) && res.residual <= 1e-10;
  res.message = res.ok ? "ok" : "solver residual above 1e-10 (system may be below N0)";
  return res;
}

} // namespace hpbem
