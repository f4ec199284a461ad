// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/surface.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "hpbem/interp.hpp"
#include "hpbem/quadrature.hpp"

namespace hpbem {

//------------------------------------------------------------------------------
// Surfaces
//------------------------------------------------------------------------------

PiecewisePlaneSurface PiecewisePlaneSurface::unit_screen()
{
  PiecewisePlaneSurface s;
  s.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  s.patches = {{{0, 1, 2, 3}, 0}};
  s.closed = false;
  return s;
}

PiecewisePlaneSurface PiecewisePlaneSurface::cube()
{
  PiecewisePlaneSurface s;
  s.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  // Outward orientation (CCW seen from outside).
  s.patches = {{{0, 3, 2, 1}, 0},  // z = 0
               {{4, 5, 6, 7}, 1},  // z = 1
               {{0, 1, 5, 4}, 2},  // y = 0
               {{2, 3, 7, 6}, 3},  // y = 1
               {{1, 2, 6, 5}, 4},  // x = 1
               {{3, 0, 4, 7}, 5}}; // x = 0
  s.closed = true;
  return s;
}

PiecewisePlaneSurface PiecewisePlaneSurface::parse(std::istream& in)
{
  PiecewisePlaneSurface s;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "surface") {
      std::string kind;
      if (!(ls >> kind) || (kind != "open" && kind != "closed"))
        throw std::runtime_error("surface file: header must be 'surface <open|closed>'");
      s.closed = (kind == "closed");
      have_header = true;
    } else if (tag == "v") {
      Eigen::Vector3d x;
      if (!(ls >> x(0) >> x(1) >> x(2))) throw std::runtime_error("surface file: bad vertex line");
      s.vertices.push_back(x);
    } else if (tag == "q") {
      Patch p;
      if (!(ls >> p.v[0] >> p.v[1] >> p.v[2] >> p.v[3] >> p.face_id))
        throw std::runtime_error("surface file: bad quad line");
      s.patches.push_back(p);
    } else {
      throw std::runtime_error("surface file: unknown tag '" + tag + "'");
    }
  }
  if (!have_header) throw std::runtime_error("surface file: missing 'surface' header");
  s.validate();
  return s;
}

PiecewisePlaneSurface PiecewisePlaneSurface::load(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open surface file: " + path);
  return parse(in);
}

void PiecewisePlaneSurface::validate() const
{
  if (patches.empty()) throw std::runtime_error("surface: no patches");
  for (const auto& p : patches) {
    for (int i = 0; i < 4; ++i)
      if (p.v[i] < 0 || p.v[i] >= static_cast<int>(vertices.size()))
        throw std::runtime_error("surface: vertex index out of range");
    const Eigen::Vector3d a = vertices[p.v[0]], b = vertices[p.v[1]], c = vertices[p.v[2]],
                          d = vertices[p.v[3]];
    Eigen::Vector3d n = (b - a).cross(d - a);
    const double scale = (b - a).norm() * (d - a).norm();
    if (n.norm() <= 1e-14 * scale) throw std::runtime_error("surface: degenerate patch");
    n.normalize();
    if (std::abs((c - a).dot(n)) > 1e-12 * (1.0 + (c - a).norm()))
      throw std::runtime_error("surface: patch is not planar to 1e-12");
  }
  // Edge sharing counts and orientation consistency.
  std::map<std::pair<int, int>, int> forward;
  for (const auto& p : patches)
    for (int e = 0; e < 4; ++e) {
      const int a = p.v[e], b = p.v[(e + 1) % 4];
      forward[{a, b}] += 1;
    }
  for (const auto& [key, count] : forward) {
    if (count > 1) throw std::runtime_error("surface: duplicated directed edge (orientation)");
    const auto rev = forward.find({key.second, key.first});
    const int total = count + (rev != forward.end() ? rev->second : 0);
    if (closed && total != 2)
      throw std::runtime_error("surface: closed surface must have every edge shared by 2 patches");
    if (!closed && total != 1 && total != 2)
      throw std::runtime_error("surface: edge shared by more than 2 patches");
  }

  // Hanging-node detection: distinct patch edges must not overlap in more than
  // a point (collinear partial overlaps come from non-conforming inputs).
  std::vector<std::pair<int, int>> segs;
  for (const auto& [key, count] : forward)
    if (key.first < key.second || forward.find({key.second, key.first}) == forward.end())
      segs.push_back(key);
  for (size_t i = 0; i < segs.size(); ++i)
    for (size_t j = i + 1; j < segs.size(); ++j) {
      const Eigen::Vector3d a0 = vertices[segs[i].first], a1 = vertices[segs[i].second];
      const Eigen::Vector3d b0 = vertices[segs[j].first], b1 = vertices[segs[j].second];
      const Eigen::Vector3d da = (a1 - a0).normalized();
      if (da.cross(b0 - a0).norm() > 1e-12 || da.cross(b1 - a0).norm() > 1e-12) continue;
      const double len = (a1 - a0).norm();
      const double t0 = (b0 - a0).dot(da), t1 = (b1 - a0).dot(da);
      const double lo = std::max(0.0, std::min(t0, t1));
      const double hi = std::min(len, std::max(t0, t1));
      if (hi - lo > 1e-10 * len)
        throw std::runtime_error("surface: non-conforming patches (overlapping edges)");
    }
}

//------------------------------------------------------------------------------
// Charts
//------------------------------------------------------------------------------

Chart::Chart(const std::array<Eigen::Vector3d, 4>& corners)
{
  m_origin = corners[0];
  const Eigen::Vector3d e10 = corners[1] - corners[0];
  const Eigen::Vector3d e30 = corners[3] - corners[0];
  m_e1 = e10.normalized();
  m_normal = e10.cross(e30).normalized();
  m_e2 = m_normal.cross(m_e1);

  auto plane = [this](const Eigen::Vector3d& x) {
    return Eigen::Vector2d((x - m_origin).dot(m_e1), (x - m_origin).dot(m_e2));
  };
  const Eigen::Vector2d a = plane(corners[0]), b2 = plane(corners[1]), c2 = plane(corners[2]),
                        d2 = plane(corners[3]);
  m_a = a;
  m_b = b2 - a;
  m_c = d2 - a;
  m_d = c2 - b2 - d2 + a;
  const double scale = m_b.norm() + m_c.norm();
  m_affine = m_d.norm() <= 1e-13 * scale;
}

Eigen::Vector3d Chart::map(double xi1, double xi2) const
{
  const Eigen::Vector2d p = m_a + xi1 * m_b + xi2 * m_c + (xi1 * xi2) * m_d;
  return m_origin + p(0) * m_e1 + p(1) * m_e2;
}

Eigen::Matrix2d Chart::jacobian(double xi1, double xi2) const
{
  Eigen::Matrix2d j;
  j.col(0) = m_b + xi2 * m_d;
  j.col(1) = m_c + xi1 * m_d;
  return j;
}

double Chart::jacobian_det(double xi1, double xi2) const
{
  return jacobian(xi1, xi2).determinant();
}

Eigen::Vector3d Chart::push_vector(double xi1, double xi2, const Eigen::Vector2d& vhat) const
{
  const Eigen::Matrix2d j = jacobian(xi1, xi2);
  const double det = j.determinant();
  if (std::abs(det) < 1e-14) throw std::runtime_error("chart: degenerate Jacobian");
  const Eigen::Vector2d w = (j * vhat) / det;
  return w(0) * m_e1 + w(1) * m_e2;
}

Eigen::Vector3d Chart::push_raw(double xi1, double xi2, const Eigen::Vector2d& vhat) const
{
  const Eigen::Vector2d w = jacobian(xi1, xi2) * vhat;
  return w(0) * m_e1 + w(1) * m_e2;
}

Eigen::Vector2d Chart::pull_tangent(double xi1, double xi2, const Eigen::Vector3d& v) const
{
  const Eigen::Matrix2d j = jacobian(xi1, xi2);
  const double det = j.determinant();
  if (std::abs(det) < 1e-14) throw std::runtime_error("chart: degenerate Jacobian");
  const Eigen::Vector2d vp(v.dot(m_e1), v.dot(m_e2));
  return det * (j.inverse() * vp);
}

Eigen::Vector2d Chart::inverse(const Eigen::Vector3d& x) const
{
  Eigen::Vector2d xi;
  if (!contains(x, &xi, 1e-9))
    throw std::runtime_error("chart: point is not on the element");
  return xi;
}

bool Chart::contains(const Eigen::Vector3d& x, Eigen::Vector2d* xi_out, double tol) const
{
  const double scale = m_b.norm() + m_c.norm();
  if (std::abs((x - m_origin).dot(m_normal)) > 1e-8 * (1.0 + scale)) return false;
  const Eigen::Vector2d target((x - m_origin).dot(m_e1), (x - m_origin).dot(m_e2));
  // Newton on the bilinear map (converges in one step for affine charts).
  Eigen::Vector2d xi(0.5, 0.5);
  for (int it = 0; it < 30; ++it) {
    const Eigen::Vector2d r = m_a + xi(0) * m_b + xi(1) * m_c + (xi(0) * xi(1)) * m_d - target;
    if (r.norm() <= 1e-13 * (1.0 + scale)) break;
    xi -= jacobian(xi(0), xi(1)).inverse() * r;
  }
  const Eigen::Vector2d r = m_a + xi(0) * m_b + xi(1) * m_c + (xi(0) * xi(1)) * m_d - target;
  if (r.norm() > 1e-10 * (1.0 + scale)) return false;
  if (xi(0) < -tol || xi(0) > 1.0 + tol || xi(1) < -tol || xi(1) > 1.0 + tol) return false;
  if (xi_out) *xi_out = xi.cwiseMax(0.0).cwiseMin(1.0);
  return true;
}

Eigen::Vector3d piola_push(const Chart& chart, const RTFunction& vhat, double xi1, double xi2)
{
  return chart.push_vector(xi1, xi2, vhat(xi1, xi2));
}

double piola_push_divergence(const Chart& chart, const RTFunction& vhat, double xi1, double xi2)
{
  return vhat.divergence()(xi1, xi2) / chart.jacobian_det(xi1, xi2);
}

RTFunction piola_pull(const Chart& chart,
                      const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& v, int p,
                      int quad_points)
{
  if (quad_points < 0) quad_points = p + 4;
  const QuadratureRule rule = gauss_legendre(quad_points);
  Eigen::MatrixXd v1(rule.size(), rule.size()), v2(rule.size(), rule.size());
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j) {
      const double x1 = rule.points(i), x2 = rule.points(j);
      const Eigen::Vector2d vhat = chart.pull_tangent(x1, x2, v(chart.map(x1, x2)));
      v1(i, j) = vhat(0);
      v2(i, j) = vhat(1);
    }
  const Eigen::MatrixXd l1 = rule.weights.asDiagonal() * legendre_values(p, rule.points);
  const Eigen::MatrixXd l0 = rule.weights.asDiagonal() * legendre_values(p - 1, rule.points);
  return RTFunction(TensorPolynomial(l1.transpose() * v1 * l0),
                    TensorPolynomial(l0.transpose() * v2 * l1));
}

//------------------------------------------------------------------------------
// Mesh
//------------------------------------------------------------------------------

int QuadMesh::n_interior_edges() const
{
  int n = 0;
  for (const auto& e : edges)
    if (!e.boundary) ++n;
  return n;
}

double QuadMesh::h_max() const
{
  double h = 0.0;
  for (int e = 0; e < n_elements(); ++e) h = std::max(h, quality(e).h);
  return h;
}

double QuadMesh::h_min() const
{
  double h = std::numeric_limits<double>::max();
  for (int e = 0; e < n_elements(); ++e) h = std::min(h, quality(e).h);
  return h;
}

ElementQuality QuadMesh::quality(int element) const
{
  ElementQuality q;
  const auto& nd = element_nodes[element];
  std::array<Eigen::Vector3d, 4> c = {nodes[nd[0]], nodes[nd[1]], nodes[nd[2]], nodes[nd[3]]};
  q.h = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) q.h = std::max(q.h, (c[i] - c[j]).norm());

  const Chart& chart = charts[element];
  // Inscribed-circle diameter by sampling the interior against the edges.
  auto plane = [&](const Eigen::Vector3d& x) {
    return Eigen::Vector2d((x - c[0]).dot(chart.frame_e1()), (x - c[0]).dot(chart.frame_e2()));
  };
  std::array<Eigen::Vector2d, 4> pc = {plane(c[0]), plane(c[1]), plane(c[2]), plane(c[3])};
  auto seg_dist = [](const Eigen::Vector2d& x, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (x - (a + t * ab)).norm();
  };
  double best = 0.0;
  const int m = 16; // even: the grid contains the centroid parameter (1/2, 1/2)
  for (int i = 1; i < m; ++i)
    for (int j = 1; j < m; ++j) {
      const double x1 = double(i) / m, x2 = double(j) / m;
      const Eigen::Vector2d x = plane(chart.map(x1, x2));
      double dmin = std::numeric_limits<double>::max();
      for (int e = 0; e < 4; ++e) dmin = std::min(dmin, seg_dist(x, pc[e], pc[(e + 1) % 4]));
      best = std::max(best, dmin);
    }
  q.rho = 2.0 * best;

  q.jac_min = std::numeric_limits<double>::max();
  q.jac_max = 0.0;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) {
      const double det = chart.jacobian_det(i / 8.0, j / 8.0);
      q.jac_min = std::min(q.jac_min, det);
      q.jac_max = std::max(q.jac_max, det);
    }
  q.d2_norm = chart.second_derivative_norm();
  return q;
}

QuadMesh build_quad_mesh(const PiecewisePlaneSurface& surface, int refinement)
{
  if (refinement < 0) throw std::invalid_argument("build_quad_mesh: refinement must be >= 0");
  surface.validate();

  QuadMesh mesh;
  mesh.closed = surface.closed;
  mesh.refinement = refinement;
  const int m = 1 << refinement;

  std::map<std::array<long long, 3>, int> node_ids;
  auto node_of = [&](const Eigen::Vector3d& x) {
    const std::array<long long, 3> key = {llround(x(0) * 68719476736.0),
                                          llround(x(1) * 68719476736.0),
                                          llround(x(2) * 68719476736.0)};
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;
    const int id = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(x);
    node_ids.emplace(key, id);
    return id;
  };

  for (size_t pi = 0; pi < surface.patches.size(); ++pi) {
    const auto& patch = surface.patches[pi];
    const Eigen::Vector3d a = surface.vertices[patch.v[0]], b = surface.vertices[patch.v[1]],
                          c = surface.vertices[patch.v[2]], d = surface.vertices[patch.v[3]];
    auto point = [&](int i, int j) {
      const double s = double(i) / m, t = double(j) / m;
      return Eigen::Vector3d((1 - s) * (1 - t) * a + s * (1 - t) * b + s * t * c + (1 - s) * t * d);
    };
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        const std::array<Eigen::Vector3d, 4> corners = {point(i, j), point(i + 1, j),
                                                        point(i + 1, j + 1), point(i, j + 1)};
        mesh.element_nodes.push_back({node_of(corners[0]), node_of(corners[1]),
                                      node_of(corners[2]), node_of(corners[3])});
        mesh.charts.emplace_back(corners);
        mesh.face_of.push_back(patch.face_id);
      }
  }

  // Edge connectivity with canonical direction v0 < v1.
  std::map<std::pair<int, int>, int> edge_ids;
  mesh.element_edges.resize(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int le = 1; le <= 4; ++le) {
      const int a = mesh.element_nodes[e][le - 1];
      const int b = mesh.element_nodes[e][le % 4];
      const auto key = std::minmax(a, b);
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        MeshEdge edge;
        edge.v0 = key.first;
        edge.v1 = key.second;
        it = edge_ids.emplace(key, static_cast<int>(mesh.edges.size())).first;
        mesh.edges.push_back(edge);
      }
      MeshEdge& edge = mesh.edges[it->second];
      edge.sides.push_back({e, le, a != edge.v0});
      mesh.element_edges[e][le - 1] = it->second;
    }

  mesh.boundary_node.assign(mesh.nodes.size(), 0);
  for (auto& edge : mesh.edges) {
    if (edge.sides.size() > 2)
      throw std::runtime_error("build_quad_mesh: edge shared by more than two elements");
    edge.boundary = edge.sides.size() == 1;
    if (edge.boundary) {
      if (mesh.closed)
        throw std::runtime_error("build_quad_mesh: closed surface has an unmatched edge");
      mesh.boundary_node[edge.v0] = 1;
      mesh.boundary_node[edge.v1] = 1;
    } else if (edge.sides[0].reversed == edge.sides[1].reversed) {
      throw std::runtime_error("build_quad_mesh: inconsistent element orientation across an edge");
    }
  }
  return mesh;
}

//------------------------------------------------------------------------------
// Global RT space
//------------------------------------------------------------------------------

namespace {

std::vector<RTFunction> assembly_basis(int p)
{
  std::vector<RTFunction> basis = rt_edge_basis(p);
  for (auto& b : rt_bubble_basis(p)) basis.push_back(std::move(b));
  return basis;
}

} // namespace

GlobalRTSpace::GlobalRTSpace(QuadMesh mesh, int degree, bool eliminate_boundary)
    : m_mesh(std::move(mesh)), m_p(degree)
{
  if (degree < 1) throw std::invalid_argument("GlobalRTSpace: degree must be >= 1");
  m_basis = assembly_basis(m_p);

  const int nbub = rt_bubble_dimension(m_p);
  Eigen::MatrixXd q(rt_dimension(m_p), std::max(nbub, 1));
  q.setZero();
  const auto bubbles = rt_bubble_basis(m_p);
  for (int i = 0; i < nbub; ++i) q.col(i) = rt_coefficients(bubbles[i]);
  m_bubble_qr.compute(q);

  // Edges carrying dofs get p of them each, in edge-creation order.
  std::vector<int> edge_rank(m_mesh.edges.size(), -1);
  int rank = 0;
  for (size_t e = 0; e < m_mesh.edges.size(); ++e)
    if (!(m_mesh.edges[e].boundary && eliminate_boundary)) edge_rank[e] = rank++;
  const int n_edge_dofs = rank * m_p;

  m_dofs.resize(m_mesh.n_elements());
  for (int el = 0; el < m_mesh.n_elements(); ++el) {
    auto& dofs = m_dofs[el];
    dofs.resize(m_basis.size());
    for (int le = 1; le <= 4; ++le) {
      const int ge = m_mesh.element_edges[el][le - 1];
      const MeshEdge& edge = m_mesh.edges[ge];
      const MeshEdgeSide* side = nullptr;
      int owner = edge.sides[0].element;
      for (const auto& s : edge.sides) {
        owner = std::min(owner, s.element);
        if (s.element == el && s.local_edge == le) side = &s;
      }
      for (int k = 0; k < m_p; ++k) {
        GlobalDof d;
        if (edge_rank[ge] < 0) {
          d.index = -1;
        } else {
          d.index = edge_rank[ge] * m_p + k;
          const double owner_sign = (el == owner) ? 1.0 : -1.0;
          const double parity = (side->reversed && (k % 2 == 1)) ? -1.0 : 1.0;
          d.sign = owner_sign * parity;
        }
        dofs[(le - 1) * m_p + k] = d;
      }
    }
    for (int j = 0; j < nbub; ++j)
      dofs[4 * m_p + j] = GlobalDof{n_edge_dofs + el * nbub + j, 1.0};
  }
  m_ndof = n_edge_dofs + m_mesh.n_elements() * nbub;
}

RTFunction GlobalRTSpace::element_function(int element, const Eigen::VectorXd& coeffs) const
{
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(rt_dimension(m_p));
  for (size_t i = 0; i < m_basis.size(); ++i) {
    const GlobalDof d = m_dofs[element][i];
    if (d.index < 0) continue;
    acc += d.sign * coeffs(d.index) * rt_coefficients(m_basis[i]);
  }
  return rt_from_coefficients(m_p, acc);
}

Eigen::VectorXd GlobalRTSpace::to_local_coefficients(const RTFunction& v) const
{
  if (v.order() != m_p)
    throw std::invalid_argument("to_local_coefficients: order mismatch");
  Eigen::VectorXd loc(m_basis.size());
  Eigen::VectorXd residual = rt_coefficients(v);
  for (int le = 1; le <= 4; ++le) {
    const Eigen::VectorXd tr = v.normal_trace(le).coeff();
    for (int k = 0; k < m_p; ++k) {
      const double c = tr(k);
      loc((le - 1) * m_p + k) = c;
      residual -= c * rt_coefficients(m_basis[(le - 1) * m_p + k]);
    }
  }
  const int nbub = rt_bubble_dimension(m_p);
  if (nbub > 0) {
    const Eigen::VectorXd b = m_bubble_qr.solve(residual);
    loc.tail(nbub) = b;
  }
  return loc;
}

GlobalRTSpace build_mesh(const PiecewisePlaneSurface& surface, int refinement, int degree)
{
  return GlobalRTSpace(build_quad_mesh(surface, refinement), degree);
}

//------------------------------------------------------------------------------
// Global interpolation and field views
//------------------------------------------------------------------------------

Eigen::VectorXd global_interpolate(const SurfaceField& u, const GlobalRTSpace& space,
                                   int truncation)
{
  if (!u.value || !u.divergence)
    throw std::invalid_argument("global_interpolate: field must provide value and divergence");
  const int p = space.degree();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(space.dimension());
  std::vector<char> written(space.dimension(), 0);

  for (int el = 0; el < space.mesh().n_elements(); ++el) {
    const Chart* chart = &space.mesh().charts[el];
    VectorField ref;
    ref.value = [chart, &u](double x1, double x2) {
      return chart->pull_tangent(x1, x2, u.value(chart->map(x1, x2)));
    };
    ref.divergence = [chart, &u](double x1, double x2) {
      return chart->jacobian_det(x1, x2) * u.divergence(chart->map(x1, x2));
    };
    const InterpolantBreakdown breakdown = interp_div_m12(ref, p, truncation);
    const Eigen::VectorXd loc = space.to_local_coefficients(breakdown.total);
    for (int i = 0; i < space.local_dimension(); ++i) {
      const GlobalDof d = space.dof(el, i);
      if (d.index < 0) continue; // boundary dofs of screens are eliminated
      const double value = loc(i) * d.sign;
      if (written[d.index]) {
        if (std::abs(x(d.index) - value) > 1e-9 * (1.0 + std::abs(value)))
          throw std::runtime_error(
              "global_interpolate: shared-edge dofs disagree (conformity failure)");
      } else {
        x(d.index) = value;
        written[d.index] = 1;
      }
    }
  }
  return x;
}

SurfaceField discrete_field(const GlobalRTSpace& space, Eigen::VectorXd coeffs)
{
  auto elements = std::make_shared<std::vector<RTFunction>>();
  for (int e = 0; e < space.mesh().n_elements(); ++e)
    elements->push_back(space.element_function(e, coeffs));
  auto last = std::make_shared<int>(0);
  const QuadMesh* mesh = &space.mesh();

  auto locate = [mesh, last](const Eigen::Vector3d& x, Eigen::Vector2d* xi) {
    const int n = mesh->n_elements();
    for (int probe = 0; probe < n; ++probe) {
      const int e = (*last + probe) % n;
      if (mesh->charts[e].contains(x, xi)) {
        *last = e;
        return e;
      }
    }
    throw std::runtime_error("discrete_field: point is not on the surface mesh");
  };

  SurfaceField f;
  f.value = [mesh, elements, locate](const Eigen::Vector3d& x) {
    Eigen::Vector2d xi;
    const int e = locate(x, &xi);
    return piola_push(mesh->charts[e], (*elements)[e], xi(0), xi(1));
  };
  f.divergence = [mesh, elements, locate](const Eigen::Vector3d& x) {
    Eigen::Vector2d xi;
    const int e = locate(x, &xi);
    return piola_push_divergence(mesh->charts[e], (*elements)[e], xi(0), xi(1));
  };
  return f;
}

Eigen::MatrixXd l2_gram(const GlobalRTSpace& space, int quad_points)
{
  const int p = space.degree();
  if (quad_points < 0) quad_points = p + 6;
  const QuadratureRule rule = gauss_legendre(quad_points);
  const auto& basis = space.local_basis();
  const int nloc = space.local_dimension();
  const int n = space.dimension();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);

  for (int el = 0; el < space.mesh().n_elements(); ++el) {
    const Chart& chart = space.mesh().charts[el];
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nloc, nloc);
    for (int a = 0; a < rule.size(); ++a)
      for (int b = 0; b < rule.size(); ++b) {
        const double x1 = rule.points(a), x2 = rule.points(b);
        const double w = rule.weights(a) * rule.weights(b);
        const Eigen::Matrix2d j = chart.jacobian(x1, x2);
        const Eigen::Matrix2d metric = (j.transpose() * j) / j.determinant();
        Eigen::MatrixXd vals(nloc, 2);
        for (int i = 0; i < nloc; ++i) vals.row(i) = basis[i](x1, x2).transpose();
        local += w * vals * metric * vals.transpose();
      }
    for (int i = 0; i < nloc; ++i) {
      const GlobalDof di = space.dof(el, i);
      if (di.index < 0) continue;
      for (int j = 0; j < nloc; ++j) {
        const GlobalDof dj = space.dof(el, j);
        if (dj.index < 0) continue;
        gram(di.index, dj.index) += di.sign * dj.sign * local(i, j);
      }
    }
  }
  return gram;
}

//------------------------------------------------------------------------------
// Discrete Helmholtz decomposition
//------------------------------------------------------------------------------

Eigen::VectorXd DiscreteHelmholtz::project_W(const Eigen::VectorXd& x) const
{
  if (dim_W == 0) return Eigen::VectorXd::Zero(x.size());
  return w_basis * wgw.solve(w_basis.transpose() * (gram * x));
}

Eigen::VectorXd DiscreteHelmholtz::project_V(const Eigen::VectorXd& x) const
{
  return x - project_W(x);
}

DiscreteHelmholtz helmholtz_split(const GlobalRTSpace& space)
{
  const QuadMesh& mesh = space.mesh();
  const int p = space.degree();
  const int n = space.dimension();

  // The curl construction below spans the divergence-free subspace only when
  // there are no harmonic fields: screens must be disks (Euler characteristic
  // 1), closed surfaces genus zero (characteristic 2).
  const long chi = static_cast<long>(mesh.nodes.size()) - static_cast<long>(mesh.edges.size()) +
                   mesh.n_elements();
  if (chi != (mesh.closed ? 2 : 1))
    throw std::runtime_error("helmholtz_split: surface topology unsupported (harmonic fields)");

  // Scalar space S_hp: continuous piecewise P_p, vanishing on the boundary for
  // screens, modulo constants (last vertex dof dropped) for closed surfaces.
  struct ScalarDof {
    enum Kind { vertex, edge, interior } kind;
    int id;   // node id / edge id / element id
    int mode; // edge or interior mode index
  };
  std::vector<ScalarDof> sdofs;
  for (int v = 0; v < static_cast<int>(mesh.nodes.size()); ++v) {
    if (!mesh.closed && mesh.boundary_node[v]) continue;
    if (mesh.closed && v == static_cast<int>(mesh.nodes.size()) - 1) continue; // gauge
    sdofs.push_back({ScalarDof::vertex, v, 0});
  }
  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
    if (mesh.edges[e].boundary) continue;
    for (int k = 0; k < p - 1; ++k) sdofs.push_back({ScalarDof::edge, e, k});
  }
  for (int el = 0; el < mesh.n_elements(); ++el)
    for (int k = 0; k < (p - 1) * (p - 1); ++k) sdofs.push_back({ScalarDof::interior, el, k});

  const Eigen::MatrixXd bubbles = bubble_basis_coefficients(p);
  Eigen::VectorXd linear_blend(2);
  linear_blend << 0.5, -0.5 / std::sqrt(3.0);
  const auto scalar_bubbles = scalar_bubble_basis(p);

  // Bilinear vertex hats on the reference square.
  auto corner_hat = [p](int corner) {
    Eigen::VectorXd ell0(2), ell1(2);
    ell0 << 0.5, -0.5 / std::sqrt(3.0);
    ell1 << 0.5, 0.5 / std::sqrt(3.0);
    const Eigen::Vector2d x = corner_point(corner);
    TensorPolynomial hat(1, 1);
    hat.coeff() = ((x(0) > 0.5) ? ell1 : ell0) * ((x(1) > 0.5) ? ell1 : ell0).transpose();
    return hat.embedded(p, p);
  };

  DiscreteHelmholtz split;
  split.dim_W = static_cast<int>(sdofs.size());
  split.dim_V = n - split.dim_W;
  split.w_basis = Eigen::MatrixXd::Zero(n, split.dim_W);

  for (int col = 0; col < split.dim_W; ++col) {
    const ScalarDof& sd = sdofs[col];
    std::vector<char> written(n, 0);
    for (int el = 0; el < mesh.n_elements(); ++el) {
      TensorPolynomial shat(p, p);
      bool touched = false;
      if (sd.kind == ScalarDof::vertex) {
        for (int c = 0; c < 4; ++c)
          if (mesh.element_nodes[el][c] == sd.id) {
            shat = shat + corner_hat(c);
            touched = true;
          }
      } else if (sd.kind == ScalarDof::edge) {
        for (int le = 1; le <= 4; ++le)
          if (mesh.element_edges[el][le - 1] == sd.id) {
            const MeshEdge& edge = mesh.edges[sd.id];
            bool reversed = false;
            for (const auto& s : edge.sides)
              if (s.element == el && s.local_edge == le) reversed = s.reversed;
            Eigen::VectorXd q = bubbles.col(sd.mode);
            if (reversed) q = reflect_coefficients(q);
            shat = shat + edge_blend_extension(le, q, linear_blend, p);
            touched = true;
          }
      } else if (sd.id == el) {
        shat = shat + scalar_bubbles[sd.mode];
        touched = true;
      }
      if (!touched) continue;

      const Eigen::VectorXd loc = space.to_local_coefficients(scalar_curl(shat));
      for (int i = 0; i < space.local_dimension(); ++i) {
        const GlobalDof d = space.dof(el, i);
        const double value = (d.index < 0) ? 0.0 : loc(i) * d.sign;
        if (d.index < 0) {
          if (std::abs(loc(i)) > 1e-9)
            throw std::runtime_error("helmholtz_split: curl field has boundary flux");
          continue;
        }
        if (written[d.index]) {
          if (std::abs(split.w_basis(d.index, col) - value) > 1e-9 * (1.0 + std::abs(value)))
            throw std::runtime_error("helmholtz_split: inconsistent shared-edge coefficient");
        } else {
          split.w_basis(d.index, col) = value;
          written[d.index] = 1;
        }
      }
    }
  }

  split.gram = l2_gram(space);
  if (split.dim_W > 0)
    split.wgw.compute(split.w_basis.transpose() * split.gram * split.w_basis);
  return split;
}

} // namespace hpbem
