// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_SURFACE_HPP
#define HPBEM_SURFACE_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpbem/rt_function.hpp"

namespace hpbem {

/// Piecewise plane (open or closed) surface given by plane quadrilateral
/// patches with a consistent orientation.
///
/// Text format: a header line `surface <open|closed>`, then `v x y z` vertex
/// lines, then `q i1 i2 i3 i4 face_id` quad lines with 0-based indices.
struct PiecewisePlaneSurface {
  struct Patch {
    std::array<int, 4> v;
    int face_id = 0;
  };

  std::vector<Eigen::Vector3d> vertices;
  std::vector<Patch> patches;
  bool closed = false;

  static PiecewisePlaneSurface unit_screen();
  static PiecewisePlaneSurface cube();
  static PiecewisePlaneSurface parse(std::istream& in);
  static PiecewisePlaneSurface load(const std::string& path);

  /// Planarity of every patch to 1e-12, edge sharing counts (2 everywhere for
  /// closed surfaces, 2 or 1 for open ones), consistent orientation.
  void validate() const;
};

/// Bilinear chart from the reference square onto a plane quadrilateral in R^3.
class Chart {
public:
  explicit Chart(const std::array<Eigen::Vector3d, 4>& corners);

  Eigen::Vector3d map(double xi1, double xi2) const;
  /// In-plane Jacobian with respect to the chart's orthonormal frame.
  Eigen::Matrix2d jacobian(double xi1, double xi2) const;
  double jacobian_det(double xi1, double xi2) const;
  bool affine() const { return m_affine; }

  const Eigen::Vector3d& frame_e1() const { return m_e1; }
  const Eigen::Vector3d& frame_e2() const { return m_e2; }
  const Eigen::Vector3d& normal() const { return m_normal; }

  /// Piola push of a reference vector: (1/J) DT vhat, as a 3D tangential vector.
  Eigen::Vector3d push_vector(double xi1, double xi2, const Eigen::Vector2d& vhat) const;
  /// DT vhat without the 1/J factor (the combination that appears in
  /// Jacobian-free Galerkin integrands).
  Eigen::Vector3d push_raw(double xi1, double xi2, const Eigen::Vector2d& vhat) const;
  /// Inverse Piola of a physical tangential vector at the point T(xi).
  Eigen::Vector2d pull_tangent(double xi1, double xi2, const Eigen::Vector3d& v) const;

  /// Reference coordinates of a physical point (Newton for bilinear charts).
  /// Throws if the point is not on the element within tolerance.
  Eigen::Vector2d inverse(const Eigen::Vector3d& x) const;
  bool contains(const Eigen::Vector3d& x, Eigen::Vector2d* xi_out = nullptr,
                double tol = 1e-10) const;

  /// Norm of the (constant) mixed second derivative of the bilinear map.
  double second_derivative_norm() const { return m_d.norm(); }

private:
  Eigen::Vector3d m_origin, m_e1, m_e2, m_normal;
  Eigen::Vector2d m_a, m_b, m_c, m_d; // T(xi) = a + b xi1 + c xi2 + d xi1 xi2 in-plane
  bool m_affine;
};

/// Physical value of the Piola transform of vhat at T(xi).
Eigen::Vector3d piola_push(const Chart& chart, const RTFunction& vhat, double xi1, double xi2);
/// Surface divergence of the pushed field at T(xi): div vhat(xi) / J(xi).
double piola_push_divergence(const Chart& chart, const RTFunction& vhat, double xi1, double xi2);
/// L^2 projection of the pulled-back field onto RT_p(K); exact on pushed
/// polynomial fields, so push followed by pull is the identity there.
RTFunction piola_pull(const Chart& chart,
                      const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& v, int p,
                      int quad_points = -1);

struct MeshEdgeSide {
  int element;
  int local_edge; // 1..4
  bool reversed;  // element traverses the edge against the canonical direction
};

struct MeshEdge {
  int v0, v1; // canonical direction v0 -> v1 with v0 < v1
  std::vector<MeshEdgeSide> sides;
  bool boundary = false;
};

struct ElementQuality {
  double h;        // diameter
  double rho;      // inscribed-circle diameter
  double jac_min;  // Jacobian bounds over a sample grid
  double jac_max;
  double d2_norm;  // second-derivative bound of the chart
};

struct QuadMesh {
  std::vector<Eigen::Vector3d> nodes;
  std::vector<std::array<int, 4>> element_nodes; // CCW in the face plane
  std::vector<Chart> charts;
  std::vector<int> face_of;
  std::vector<MeshEdge> edges;
  std::vector<std::array<int, 4>> element_edges; // mesh edge id per local edge
  std::vector<char> boundary_node;
  bool closed = false;
  int refinement = 0;

  int n_elements() const { return static_cast<int>(charts.size()); }
  int n_interior_edges() const;
  ElementQuality quality(int element) const;
  double h_max() const;
  double h_min() const;
};

QuadMesh build_quad_mesh(const PiecewisePlaneSurface& surface, int refinement);

struct GlobalDof {
  int index = -1;    // -1: eliminated boundary dof
  double sign = 1.0; // orientation/parity factor, in {-1,+1}
};

/// Conforming global RT space X_hp on a quad mesh. Local basis on every
/// element: 4p edge functions (edge-major) followed by 2p(p-1) bubbles.
/// Each interior edge carries p dofs in its canonical parametrization; the
/// lower-index element owns the edge, the other side enters with a sign flip;
/// reversal of the edge parameter contributes Legendre parity (-1)^k.
/// On open surfaces the boundary normal-trace dofs are eliminated.
class GlobalRTSpace {
public:
  /// eliminate_boundary realizes the zero normal trace of X0 on open surfaces;
  /// disable it to work in the full H(div)-conforming space.
  GlobalRTSpace(QuadMesh mesh, int degree, bool eliminate_boundary = true);

  const QuadMesh& mesh() const { return m_mesh; }
  int degree() const { return m_p; }
  int dimension() const { return m_ndof; }
  int local_dimension() const { return static_cast<int>(m_basis.size()); }
  const std::vector<RTFunction>& local_basis() const { return m_basis; }
  GlobalDof dof(int element, int local_index) const { return m_dofs[element][local_index]; }

  /// Element-local RT representation of a global coefficient vector.
  RTFunction element_function(int element, const Eigen::VectorXd& coeffs) const;

  /// Local-basis coefficients of an RT function (edge traces then bubbles).
  Eigen::VectorXd to_local_coefficients(const RTFunction& v) const;

private:
  QuadMesh m_mesh;
  int m_p;
  int m_ndof;
  std::vector<RTFunction> m_basis;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> m_bubble_qr;
  std::vector<std::vector<GlobalDof>> m_dofs;
};

/// Mesh plus conforming space in one step (uniform 2^L x 2^L refinement).
GlobalRTSpace build_mesh(const PiecewisePlaneSurface& surface, int refinement, int degree);

/// Tangential field on the surface with an evaluable surface divergence.
struct SurfaceField {
  std::function<Eigen::Vector3d(const Eigen::Vector3d&)> value;
  std::function<double(const Eigen::Vector3d&)> divergence;
};

/// Element-wise pullback, reference interpolation by the tilde H^{-1/2}(div)
/// operator, and push-forward. Shared-edge dofs are computed from both sides
/// and must agree to 1e-9; a larger mismatch throws (conformity failure).
Eigen::VectorXd global_interpolate(const SurfaceField& u, const GlobalRTSpace& space,
                                   int truncation = 64);

/// View a coefficient vector as a surface field (point location by element scan).
SurfaceField discrete_field(const GlobalRTSpace& space, Eigen::VectorXd coeffs);

/// Global L^2(Gamma) Gram matrix of the space.
Eigen::MatrixXd l2_gram(const GlobalRTSpace& space, int quad_points = -1);

/// L^2-orthogonal discrete Helmholtz decomposition X_hp = V_hp + W_hp with
/// W_hp = curl of the continuous scalar space (vanishing on the boundary for
/// screens, modulo constants for closed surfaces).
struct DiscreteHelmholtz {
  Eigen::MatrixXd w_basis; // N x dim_W coefficient columns, div-free
  Eigen::MatrixXd gram;    // L^2(Gamma) Gram of the space
  int dim_W = 0;
  int dim_V = 0;

  Eigen::VectorXd project_W(const Eigen::VectorXd& x) const;
  Eigen::VectorXd project_V(const Eigen::VectorXd& x) const;

  Eigen::LDLT<Eigen::MatrixXd> wgw; // factor of W^T G W
};

DiscreteHelmholtz helmholtz_split(const GlobalRTSpace& space);

} // namespace hpbem

#endif
