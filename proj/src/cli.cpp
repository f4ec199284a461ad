// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "hpbem/efie.hpp"
#include "hpbem/fd_oracle.hpp"
#include "hpbem/fields.hpp"
#include "hpbem/interp.hpp"
#include "hpbem/quadrature.hpp"

namespace hpbem {

namespace {

constexpr double pi = 3.14159265358979323846;

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class Csv {
public:
  explicit Csv(const std::string& path) : m_out(path)
  {
    if (!m_out) throw std::runtime_error("cannot open output file: " + path);
  }
  void row(const std::vector<std::string>& cells)
  {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) m_out << ',';
      m_out << cells[i];
    }
    m_out << '\n';
  }

private:
  std::ofstream m_out;
};

// Config-file support: --config <json> overrides flag values; unknown keys are
// rejected. Every option registers a setter keyed by its long name.
struct ConfigMap {
  std::map<std::string, std::function<void(const nlohmann::json&)>> setters;

  void add(const std::string& key, int* target)
  {
    setters[key] = [target](const nlohmann::json& v) { *target = v.get<int>(); };
  }
  void add(const std::string& key, double* target)
  {
    setters[key] = [target](const nlohmann::json& v) { *target = v.get<double>(); };
  }
  void add(const std::string& key, bool* target)
  {
    setters[key] = [target](const nlohmann::json& v) { *target = v.get<bool>(); };
  }
  void add(const std::string& key, std::string* target)
  {
    setters[key] = [target](const nlohmann::json& v) { *target = v.get<std::string>(); };
  }
  void add(const std::string& key, std::uint64_t* target)
  {
    setters[key] = [target](const nlohmann::json& v) { *target = v.get<std::uint64_t>(); };
  }

  // returns false on unknown key
  bool apply(const std::string& path, std::string* err)
  {
    if (path.empty()) return true;
    std::ifstream in(path);
    if (!in) {
      *err = "cannot open config file: " + path;
      return false;
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      *err = std::string("config parse error: ") + e.what();
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      auto it = setters.find(key);
      if (it == setters.end()) {
        *err = "unknown config key: " + key;
        return false;
      }
      try {
        it->second(value);
      } catch (const std::exception& e) {
        *err = "bad config value for '" + key + "': " + e.what();
        return false;
      }
    }
    return true;
  }
};

PiecewisePlaneSurface named_surface(const std::string& name)
{
  if (name == "screen") return PiecewisePlaneSurface::unit_screen();
  if (name == "cube") return PiecewisePlaneSurface::cube();
  return PiecewisePlaneSurface::load(name);
}

std::vector<int> parse_int_list(const std::string& text)
{
  std::vector<int> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

//------------------------------------------------------------------------------
// infsup
//------------------------------------------------------------------------------

// two-column gnuplot-style data file
void write_plot(const std::string& path, const std::vector<std::pair<double, double>>& xy)
{
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open plot file: " + path);
  for (const auto& [x, y] : xy) out << fmt(x) << ' ' << fmt(y) << '\n';
}

int cmd_infsup(int pmin, int pmax, const std::string& out, const std::string& plot,
               bool do_assert)
{
  if (pmin < 1 || pmax < pmin || pmax > 16) {
    std::cerr << "infsup: need 1 <= pmin <= pmax <= 16\n";
    return 1;
  }
  Csv csv(out);
  csv.row({"p", "computed", "closed_form", "abs_err"});
  bool pass = true;
  std::vector<std::pair<double, double>> xy;
  for (int p = pmin; p <= pmax; ++p) {
    const InfSupReport r = infsup_constant(p);
    if (r.trivial_space) {
      csv.row({std::to_string(p), "trivial", fmt(r.closed_form), "na"});
      continue;
    }
    const double err = std::abs(r.computed - r.closed_form);
    csv.row({std::to_string(p), fmt(r.computed), fmt(r.closed_form), fmt(err)});
    xy.emplace_back(p, r.computed);
    if (err > 1e-8) pass = false;
  }
  write_plot(plot, xy);
  return (do_assert && !pass) ? 2 : 0;
}

//------------------------------------------------------------------------------
// commute-check
//------------------------------------------------------------------------------

int cmd_commute(int pmin, int pmax, int fields, std::uint64_t seed, int truncation,
                const std::string& out, bool do_assert)
{
  if (pmin < 1 || pmax < pmin || pmax > 10 || fields < 1 || truncation < 8) {
    std::cerr << "commute-check: invalid parameter ranges\n";
    return 1;
  }
  Csv csv(out);
  csv.row({"p", "field", "residual_m12", "residual_l2_right", "residual_l2_left"});
  const QuadratureRule rule = gauss_legendre(40);
  bool pass = true;
  for (int p = pmin; p <= pmax; ++p) {
    Rng rng(seed + p);
    for (int f = 0; f < fields; ++f) {
      const VectorField u = random_smooth_field(rng);
      double unorm = 0.0, divnorm = 0.0;
      for (int i = 0; i < rule.size(); ++i)
        for (int j = 0; j < rule.size(); ++j) {
          const double w = rule.weights(i) * rule.weights(j);
          unorm += w * u.value(rule.points(i), rule.points(j)).squaredNorm();
          const double d = u.divergence(rule.points(i), rule.points(j));
          divnorm += w * d * d;
        }
      unorm = std::sqrt(unorm);
      divnorm = std::sqrt(divnorm);

      // tilde H^{-1/2} diagram
      const InterpolantBreakdown m12 = interp_div_m12(u, p, truncation);
      const TensorPolynomial rhs_m12 = proj_tildeHm12(u.divergence, p - 1, truncation);
      const double r1 = (m12.total.divergence() - rhs_m12).l2_norm() / std::max(divnorm, 1e-12);

      // L^2 diagram, right square
      const InterpolantBreakdown l2b = interp_div_l2(u, p, truncation);
      const TensorPolynomial rhs_l2 = proj_L2(u.divergence, p - 1);
      const double r2 = (l2b.total.divergence() - rhs_l2).l2_norm() / std::max(divnorm, 1e-12);

      // L^2 diagram, left square
      const SmoothScalar phi = random_smooth_scalar(rng);
      const VectorField cphi = curl_field(phi);
      const InterpolantBreakdown left = interp_div_l2(cphi, p, truncation);
      const TensorPolynomial h1 = interp_H1(phi.value, p, truncation);
      const RTFunction diff = left.total - scalar_curl(h1);
      double cnorm = 0.0;
      for (int i = 0; i < rule.size(); ++i)
        for (int j = 0; j < rule.size(); ++j)
          cnorm += rule.weights(i) * rule.weights(j) *
                   cphi.value(rule.points(i), rule.points(j)).squaredNorm();
      const double r3 = diff.l2_norm() / std::max(std::sqrt(cnorm), 1e-12);

      csv.row({std::to_string(p), std::to_string(f), fmt(r1), fmt(r2), fmt(r3)});
      if (r1 > 1e-8 || r2 > 1e-9 || r3 > 1e-9) pass = false;
    }
  }
  return (do_assert && !pass) ? 2 : 0;
}

//------------------------------------------------------------------------------
// interp-stability
//------------------------------------------------------------------------------

int cmd_stability(const std::string& family, int pmin, int pmax, double delta, int truncation,
                  double max_slope, const std::string& out, const std::string& plot,
                  bool do_assert)
{
  if (pmin < 1 || pmax < pmin || pmax > 12 || delta <= 0.0) {
    std::cerr << "interp-stability: invalid parameter ranges\n";
    return 1;
  }
  VectorField u;
  if (family == "corner") {
    u = corner_singular_field(delta);
  } else if (family == "smooth") {
    u = smooth_field();
  } else if (family == "rt") {
    Rng rng(11);
    Eigen::VectorXd c(rt_dimension(2));
    for (int i = 0; i < c.size(); ++i) c(i) = rng.uniform(-1.0, 1.0);
    u = vector_field(rt_from_coefficients(2, c));
  } else {
    std::cerr << "interp-stability: family must be corner, smooth, or rt\n";
    return 1;
  }
  const auto rows = stability_scan(u, pmin, pmax, truncation);
  const double slope = fit_loglog_slope(rows);
  Csv csv(out);
  csv.row({"family", "p", "l2_norm", "div_norm", "total", "fitted_slope"});
  std::vector<std::pair<double, double>> xy;
  for (const auto& r : rows) {
    csv.row({family, std::to_string(r.p), fmt(r.l2_norm), fmt(r.div_norm), fmt(r.total),
             fmt(slope)});
    xy.emplace_back(r.p, r.total);
  }
  write_plot(plot, xy);
  return (do_assert && slope > max_slope) ? 2 : 0;
}

//------------------------------------------------------------------------------
// fracform-check
//------------------------------------------------------------------------------

int cmd_fracform(const std::string& grids_text, int truncation, const std::string& out,
                 bool do_assert)
{
  const std::vector<int> grids = parse_int_list(grids_text);
  if (grids.empty() || truncation < 8) {
    std::cerr << "fracform-check: invalid parameters\n";
    return 1;
  }
  for (int n : grids)
    if (n < 8) {
      std::cerr << "fracform-check: grids must satisfy n >= 8\n";
      return 1;
    }

  struct Row {
    FracKind kind;
    std::string m, n;
    std::function<double(double, double)> u; // 2D data (unused for edge rows)
    std::function<double(double)> ue;        // 1D data for edge rows
  };
  auto sine2 = [](int m, int n) {
    return [m, n](double x, double y) {
      return 2.0 * std::sin(m * pi * x) * std::sin(n * pi * y);
    };
  };
  std::vector<Row> rows;
  rows.push_back({FracKind::Hm12_K, "1", "1", sine2(1, 1), {}});
  rows.push_back({FracKind::Hm12_K, "2", "1", sine2(2, 1), {}});
  rows.push_back({FracKind::tildeHm12_K, "0", "0", [](double, double) { return 1.0; }, {}});
  rows.push_back({FracKind::tildeHm12_K, "1", "0",
                  [](double x, double) { return std::sqrt(2.0) * std::cos(pi * x); }, {}});
  rows.push_back({FracKind::tildeHm12_K, "x1", "x1", [](double x, double) { return x; }, {}});
  rows.push_back({FracKind::tildeH12_K, "1", "1", sine2(1, 1), {}});
  rows.push_back({FracKind::tildeH12_edge, "1", "", {},
                  [](double s) { return std::sqrt(2.0) * std::sin(pi * s); }});
  rows.push_back({FracKind::tildeH12_edge, "2", "", {},
                  [](double s) { return std::sqrt(2.0) * std::sin(2.0 * pi * s); }});

  Csv csv(out);
  std::vector<std::string> header = {"kind", "m", "n", "spectral"};
  for (int n : grids) header.push_back("oracle_n" + std::to_string(n));
  header.push_back("rel_err");
  csv.row(header);

  bool pass = true;
  for (const auto& row : rows) {
    double spectral = 0.0;
    if (row.kind == FracKind::tildeH12_edge) {
      const EdgeModeSpectrum s = edge_expand(row.ue, 1, truncation);
      spectral = ip_tildeH12_edge(s, s);
    } else if (row.kind == FracKind::tildeHm12_K) {
      const ModeSpectrum s = expand(row.u, ModeKind::cosine, truncation);
      spectral = ip_tildeHm12_K(s, s);
    } else if (row.kind == FracKind::Hm12_K) {
      const ModeSpectrum s = expand(row.u, ModeKind::sine, truncation);
      spectral = ip_Hm12_K(s, s);
    } else {
      const ModeSpectrum s = expand(row.u, ModeKind::sine, truncation);
      spectral = ip_tildeH12_K(s, s);
    }

    std::vector<std::string> cells = {to_string(row.kind), row.m, row.n, fmt(spectral)};
    double prev_err = std::numeric_limits<double>::max();
    bool monotone = true;
    double last = 0.0;
    for (int n : grids) {
      const double oracle = (row.kind == FracKind::tildeH12_edge)
                                ? fd_oracle_edge(row.ue, row.ue, n)
                                : fd_oracle(row.kind, row.u, row.u, n);
      const double err = std::abs(spectral - oracle);
      // improvement is required only above the roundoff floor
      if (err > prev_err * (1.0 + 1e-9) && err > 1e-10 * (1.0 + std::abs(spectral)))
        monotone = false;
      prev_err = err;
      last = oracle;
      cells.push_back(fmt(oracle));
    }
    const double rel = std::abs(spectral - last) / std::max(std::abs(spectral), 1e-14);
    cells.push_back(fmt(rel));
    csv.row(cells);
    if (rel > 0.05 || !monotone) pass = false;
  }
  return (do_assert && !pass) ? 2 : 0;
}

//------------------------------------------------------------------------------
// piola-check
//------------------------------------------------------------------------------

int cmd_piola(const std::string& out, bool do_assert)
{
  Csv csv(out);
  csv.row({"check", "case", "value", "reference", "error"});
  bool pass = true;

  // fixed mildly distorted plane quadrilateral
  const std::array<Eigen::Vector3d, 4> corners = {Eigen::Vector3d(0, 0, 0),
                                                  Eigen::Vector3d(1.1, -0.05, 0),
                                                  Eigen::Vector3d(1.25, 0.95, 0),
                                                  Eigen::Vector3d(-0.1, 1.05, 0)};
  const Chart chart(corners);
  Rng rng(7);

  Eigen::MatrixXd phic = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 16; ++i) phic(i / 4, i % 4) = rng.uniform(-1.0, 1.0);
  const TensorPolynomial phi(phic);
  Eigen::VectorXd qc(rt_dimension(3));
  for (int i = 0; i < qc.size(); ++i) qc(i) = rng.uniform(-1.0, 1.0);
  const RTFunction q = rt_from_coefficients(3, qc);

  // (Piola_1): <phi, div q>_{0,Gamma_j} = <phi_hat, div q_hat>_{0,K}
  {
    const QuadratureRule rule = gauss_legendre(12);
    double physical = 0.0;
    for (int i = 0; i < rule.size(); ++i)
      for (int j = 0; j < rule.size(); ++j) {
        const double x1 = rule.points(i), x2 = rule.points(j);
        physical += rule.weights(i) * rule.weights(j) * phi(x1, x2) *
                    piola_push_divergence(chart, q, x1, x2) * chart.jacobian_det(x1, x2);
      }
    const double reference = l2_inner(phi.embedded(3, 3), q.divergence().embedded(3, 3));
    const double err = std::abs(physical - reference);
    csv.row({"piola1", "pairing", fmt(physical), fmt(reference), fmt(err)});
    if (err > 1e-12 * (1.0 + std::abs(reference))) pass = false;
  }

  // flux preservation on every edge
  for (int edge = 1; edge <= 4; ++edge) {
    const QuadratureRule rule = gauss_legendre(16);
    double physical = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      const double s = rule.points(i);
      const Eigen::Vector2d xi = edge_point(edge, s);
      // d/ds T(gamma(s)) projected to the edge tangent in 3D
      const Eigen::Matrix2d jac = chart.jacobian(xi(0), xi(1));
      Eigen::Vector2d dgamma;
      switch (edge) {
        case 1: dgamma = {1, 0}; break;
        case 2: dgamma = {0, 1}; break;
        case 3: dgamma = {-1, 0}; break;
        default: dgamma = {0, -1}; break;
      }
      const Eigen::Vector2d tau2 = jac * dgamma;
      const Eigen::Vector3d tau = tau2(0) * chart.frame_e1() + tau2(1) * chart.frame_e2();
      const Eigen::Vector3d n_scaled = tau.cross(chart.normal());
      physical += rule.weights(i) * piola_push(chart, q, xi(0), xi(1)).dot(n_scaled);
    }
    const double reference = q.flux(edge);
    const double err = std::abs(physical - reference);
    csv.row({"flux", "edge" + std::to_string(edge), fmt(physical), fmt(reference), fmt(err)});
    if (err > 1e-12 * (1.0 + std::abs(reference))) pass = false;
  }

  // (Piola_2): physical/reference L2 norm ratios over the RT_3 basis
  {
    const QuadratureRule rule = gauss_legendre(12);
    double rmin = std::numeric_limits<double>::max(), rmax = 0.0;
    for (const RTFunction& b : rt_basis(3)) {
      double phys = 0.0;
      for (int i = 0; i < rule.size(); ++i)
        for (int j = 0; j < rule.size(); ++j) {
          const double x1 = rule.points(i), x2 = rule.points(j);
          phys += rule.weights(i) * rule.weights(j) *
                  piola_push(chart, b, x1, x2).squaredNorm() * chart.jacobian_det(x1, x2);
        }
      const double ratio = std::sqrt(phys) / b.l2_norm();
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
    }
    csv.row({"piola2", "ratio_spread", fmt(rmax / rmin), fmt(4.0),
             fmt(std::max(0.0, rmax / rmin - 4.0))});
    if (rmax / rmin > 4.0) pass = false;
  }

  // (Piola_4)/(Piola_5) scaling trend of the H^{-1/2} norm of the divergence
  {
    const ModeSpectrum d = expand(q.divergence(), ModeKind::sine, 64);
    const double ref_norm = norm_Hm12_K(d);
    const Eigen::MatrixXd w = frac_weight_table(FracKind::Hm12_K, 64).weights;
    for (const double h : {1.0, 0.5, 0.25}) {
      // dilation-covariant realization of H^{-1/2}(K^h): coefficients scale by
      // 1/h, per-mode weights by h
      const double scaled = std::sqrt((d.coeff / h).cwiseProduct(d.coeff / h).cwiseProduct(h * w).sum());
      const double ratio = ref_norm / scaled;
      const double target = std::sqrt(h);
      csv.row({"scaling", "h" + fmt(h), fmt(ratio), fmt(target), fmt(std::abs(ratio - target))});
      if (ratio > 2.0 * target || ratio < 0.5 * target) pass = false;
    }
  }

  // mesh quality of the shipped configurations
  for (const auto& [name, surface, level] :
       {std::tuple<std::string, PiecewisePlaneSurface, int>{"screen_L2",
                                                            PiecewisePlaneSurface::unit_screen(), 2},
        std::tuple<std::string, PiecewisePlaneSurface, int>{"cube_L1",
                                                            PiecewisePlaneSurface::cube(), 1}}) {
    const QuadMesh mesh = build_quad_mesh(surface, level);
    double hrho = 0.0, jmin = std::numeric_limits<double>::max(), jmax = 0.0;
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const ElementQuality qual = mesh.quality(e);
      hrho = std::max(hrho, qual.h / qual.rho);
      jmin = std::min(jmin, qual.jac_min);
      jmax = std::max(jmax, qual.jac_max);
    }
    csv.row({"mesh_quality", name + "_hrho_max", fmt(hrho), fmt(std::sqrt(2.0)),
             fmt(std::abs(hrho - std::sqrt(2.0)))});
    csv.row({"mesh_quality", name + "_jac_minmax", fmt(jmin), fmt(jmax), "na"});
    if (hrho > 1.5) pass = false;
  }

  return (do_assert && !pass) ? 2 : 0;
}

//------------------------------------------------------------------------------
// efie-solve and convergence
//------------------------------------------------------------------------------

struct EfieRowWriter {
  Csv csv;
  bool timings;
  explicit EfieRowWriter(const std::string& out, bool timings_)
      : csv(out), timings(timings_)
  {
    csv.row({"N", "h", "p", "k", "residual", "energy_surrogate_of_difference_to_finest",
             "assembly_seconds"});
  }
  void row(int n, double h, int p, double k, double residual, const std::string& esd,
           double seconds)
  {
    csv.row({std::to_string(n), fmt(h), std::to_string(p), fmt(k), fmt(residual), esd,
             timings ? fmt(seconds) : "na"});
  }
};

int cmd_efie_solve(const std::string& mesh_name, int refine, int degree, double k, int quad_order,
                   const std::string& out, bool do_assert, bool timings)
{
  if (refine < 0 || refine > 6 || degree < 1 || degree > 6 || !(k > 0.0)) {
    std::cerr << "efie-solve: invalid parameter ranges\n";
    return 1;
  }
  if (quad_order < 0) quad_order = degree + 3;
  if (quad_order < degree + 1) {
    std::cerr << "efie-solve: quadrature order below p+1\n";
    return 1;
  }
  const GlobalRTSpace space = build_mesh(named_surface(mesh_name), refine, degree);
  WaveContext wave;
  wave.k = k;
  const GalerkinSystem sys = assemble(space, wave, quad_order);
  const SolveResult res = solve(sys);
  EfieRowWriter w(out, timings);
  w.row(space.dimension(), space.mesh().h_max(), degree, k, res.residual, "", sys.info.seconds);
  return (do_assert && !res.ok) ? 2 : 0;
}

int cmd_convergence(const std::string& mesh_name, const std::string& levels_text, int degree,
                    double k, int quad_order, const std::string& out, bool do_assert, bool timings)
{
  const std::vector<int> levels = parse_int_list(levels_text);
  if (levels.size() < 2 || degree < 1 || degree > 6 || !(k > 0.0)) {
    std::cerr << "convergence: need at least two levels and valid degree/wavenumber\n";
    return 1;
  }
  if (quad_order < 0) quad_order = degree + 3;
  if (quad_order < degree + 1) {
    std::cerr << "convergence: quadrature order below p+1\n";
    return 1;
  }
  const PiecewisePlaneSurface surface = named_surface(mesh_name);
  WaveContext wave;
  wave.k = k;

  struct LevelData {
    int level;
    std::unique_ptr<GlobalRTSpace> space;
    SolveResult result;
    double seconds;
  };
  std::vector<LevelData> data;
  for (int level : levels) {
    LevelData d;
    d.level = level;
    d.space = std::make_unique<GlobalRTSpace>(build_mesh(surface, level, degree));
    const GalerkinSystem sys = assemble(*d.space, wave, quad_order);
    d.result = solve(sys);
    d.seconds = sys.info.seconds;
    data.push_back(std::move(d));
  }

  const GlobalRTSpace& finest = *data.back().space;
  const Eigen::MatrixXd energy = energy_matrix(finest, quad_order);
  std::vector<double> diffs;
  for (size_t i = 0; i + 1 < data.size(); ++i) {
    // prolong by interpolating the coarse solution in the finest space
    const Eigen::VectorXd re = global_interpolate(
        discrete_field(*data[i].space, data[i].result.solution.real()), finest);
    const Eigen::VectorXd im = global_interpolate(
        discrete_field(*data[i].space, data[i].result.solution.imag()), finest);
    Eigen::VectorXcd prolonged(re.size());
    prolonged.real() = re;
    prolonged.imag() = im;
    diffs.push_back(energy_surrogate(prolonged - data.back().result.solution, energy));
  }

  EfieRowWriter w(out, timings);
  bool pass = true;
  for (size_t i = 0; i < data.size(); ++i) {
    const std::string esd = (i + 1 < data.size()) ? fmt(diffs[i]) : "";
    w.row(data[i].space->dimension(), data[i].space->mesh().h_max(), degree, k,
          data[i].result.residual, esd, data[i].seconds);
    if (!data[i].result.ok) pass = false;
  }
  for (size_t i = 0; i + 1 < diffs.size(); ++i)
    if (diffs[i + 1] >= diffs[i]) pass = false;
  return (do_assert && !pass) ? 2 : 0;
}

} // namespace

//------------------------------------------------------------------------------
// argument parsing
//------------------------------------------------------------------------------

int run(const std::vector<std::string>& args)
{
  CLI::App app{"hp boundary element toolkit for the EFIE on piecewise plane surfaces"};
  app.require_subcommand(1);

  // common state shared across subcommands (each keeps its own copies)
  struct {
    int pmin = 2, pmax = 10;
    std::string out = "infsup.csv", plot, config;
    bool assert_ = false;
  } o_infsup;
  struct {
    int pmin = 1, pmax = 6, fields = 20, truncation = 64;
    std::uint64_t seed = 20240901;
    std::string out = "commute_check.csv", config;
    bool assert_ = false;
  } o_commute;
  struct {
    std::string family = "corner";
    int pmin = 2, pmax = 10, truncation = 64;
    double delta = 1e-3, max_slope = 0.3;
    std::string out = "interp_stability.csv", plot, config;
    bool assert_ = false;
  } o_stab;
  struct {
    std::string grids = "16,32,64";
    int truncation = 64;
    std::string out = "fracform_check.csv", config;
    bool assert_ = false;
  } o_frac;
  struct {
    std::string out = "piola_check.csv", config;
    bool assert_ = false;
  } o_piola;
  struct {
    std::string mesh = "screen";
    int refine = 1, degree = 1, quad = -1;
    double k = 1.0;
    std::string out = "efie_solve.csv", config;
    bool assert_ = false, timings = false;
  } o_solve;
  struct {
    std::string mesh = "screen", levels = "1,2,3";
    int degree = 1, quad = -1;
    double k = 1.0;
    std::string out = "convergence.csv", config;
    bool assert_ = false, timings = false;
  } o_conv;

  ConfigMap c_infsup, c_commute, c_stab, c_frac, c_piola, c_solve, c_conv;

  auto* s_infsup = app.add_subcommand("infsup", "discrete inf-sup constants against the closed form");
  s_infsup->add_option("--pmin", o_infsup.pmin);
  s_infsup->add_option("--pmax", o_infsup.pmax);
  s_infsup->add_option("--out", o_infsup.out);
  s_infsup->add_option("--plot", o_infsup.plot);
  s_infsup->add_option("--config", o_infsup.config);
  s_infsup->add_flag("--assert", o_infsup.assert_);
  c_infsup.add("pmin", &o_infsup.pmin);
  c_infsup.add("pmax", &o_infsup.pmax);
  c_infsup.add("out", &o_infsup.out);
  c_infsup.add("plot", &o_infsup.plot);

  auto* s_commute = app.add_subcommand("commute-check", "commuting diagram residuals");
  s_commute->add_option("--pmin", o_commute.pmin);
  s_commute->add_option("--pmax", o_commute.pmax);
  s_commute->add_option("--fields", o_commute.fields);
  s_commute->add_option("--seed", o_commute.seed);
  s_commute->add_option("--M", o_commute.truncation);
  s_commute->add_option("--out", o_commute.out);
  s_commute->add_option("--config", o_commute.config);
  s_commute->add_flag("--assert", o_commute.assert_);
  c_commute.add("pmin", &o_commute.pmin);
  c_commute.add("pmax", &o_commute.pmax);
  c_commute.add("fields", &o_commute.fields);
  c_commute.add("seed", &o_commute.seed);
  c_commute.add("M", &o_commute.truncation);
  c_commute.add("out", &o_commute.out);

  auto* s_stab = app.add_subcommand("interp-stability", "interpolant norm growth across degrees");
  s_stab->add_option("--family", o_stab.family);
  s_stab->add_option("--pmin", o_stab.pmin);
  s_stab->add_option("--pmax", o_stab.pmax);
  s_stab->add_option("--delta", o_stab.delta);
  s_stab->add_option("--M", o_stab.truncation);
  s_stab->add_option("--max-slope", o_stab.max_slope);
  s_stab->add_option("--out", o_stab.out);
  s_stab->add_option("--plot", o_stab.plot);
  s_stab->add_option("--config", o_stab.config);
  s_stab->add_flag("--assert", o_stab.assert_);
  c_stab.add("family", &o_stab.family);
  c_stab.add("pmin", &o_stab.pmin);
  c_stab.add("pmax", &o_stab.pmax);
  c_stab.add("delta", &o_stab.delta);
  c_stab.add("M", &o_stab.truncation);
  c_stab.add("max-slope", &o_stab.max_slope);
  c_stab.add("out", &o_stab.out);
  c_stab.add("plot", &o_stab.plot);

  auto* s_frac = app.add_subcommand("fracform-check", "spectral inner products against the FD oracle");
  s_frac->add_option("--grids", o_frac.grids);
  s_frac->add_option("--M", o_frac.truncation);
  s_frac->add_option("--out", o_frac.out);
  s_frac->add_option("--config", o_frac.config);
  s_frac->add_flag("--assert", o_frac.assert_);
  c_frac.add("grids", &o_frac.grids);
  c_frac.add("M", &o_frac.truncation);
  c_frac.add("out", &o_frac.out);

  auto* s_piola = app.add_subcommand("piola-check", "Piola identities and mesh quality");
  s_piola->add_option("--out", o_piola.out);
  s_piola->add_option("--config", o_piola.config);
  s_piola->add_flag("--assert", o_piola.assert_);
  c_piola.add("out", &o_piola.out);

  auto* s_solve = app.add_subcommand("efie-solve", "assemble and solve one EFIE system");
  s_solve->add_option("--mesh", o_solve.mesh);
  s_solve->add_option("--refine", o_solve.refine);
  s_solve->add_option("--degree", o_solve.degree);
  s_solve->add_option("--wavenumber", o_solve.k);
  s_solve->add_option("--quad-order", o_solve.quad);
  s_solve->add_option("--out", o_solve.out);
  s_solve->add_option("--config", o_solve.config);
  s_solve->add_flag("--assert", o_solve.assert_);
  s_solve->add_flag("--timings", o_solve.timings);
  c_solve.add("mesh", &o_solve.mesh);
  c_solve.add("refine", &o_solve.refine);
  c_solve.add("degree", &o_solve.degree);
  c_solve.add("wavenumber", &o_solve.k);
  c_solve.add("quad-order", &o_solve.quad);
  c_solve.add("out", &o_solve.out);

  auto* s_conv = app.add_subcommand("convergence", "refinement family with energy differences");
  s_conv->add_option("--mesh", o_conv.mesh);
  s_conv->add_option("--levels", o_conv.levels);
  s_conv->add_option("--degree", o_conv.degree);
  s_conv->add_option("--wavenumber", o_conv.k);
  s_conv->add_option("--quad-order", o_conv.quad);
  s_conv->add_option("--out", o_conv.out);
  s_conv->add_option("--config", o_conv.config);
  s_conv->add_flag("--assert", o_conv.assert_);
  s_conv->add_flag("--timings", o_conv.timings);
  c_conv.add("mesh", &o_conv.mesh);
  c_conv.add("levels", &o_conv.levels);
  c_conv.add("degree", &o_conv.degree);
  c_conv.add("wavenumber", &o_conv.k);
  c_conv.add("quad-order", &o_conv.quad);
  c_conv.add("out", &o_conv.out);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << '\n';
    return (e.get_exit_code() == 0) ? 0 : 1;
  }

  try {
    std::string err;
    if (s_infsup->parsed()) {
      if (!c_infsup.apply(o_infsup.config, &err)) { std::cerr << err << '\n'; return 1; }
      return cmd_infsup(o_infsup.pmin, o_infsup.pmax, o_infsup.out, o_infsup.plot,
                        o_infsup.assert_);
    }
    if (s_commute->parsed()) {
      if (!c_commute.apply(o_commute.config, &err)) { std::cerr << err << '\n'; return 1; }
      return cmd_commute(o_commute.pmin, o_commute.pmax, o_commute.fields, o_commute.seed,
                         o_commute.truncation, o_commute.out, o_commute.assert_);
    }
    if (s_stab->parsed()) {
      if (!c_stab.apply(o_stab.config, &err)) { std::cerr << err << '\n'; return 1; }
      return cmd_stability(o_stab.family, o_stab.pmin, o_stab.pmax, o_stab.delta,
                           o_stab.truncation, o_stab.max_slope, o_stab.out, o_stab.plot,
                           o_stab.assert_);
    }
    if (s_frac->parsed()) {
      if (!c_frac.apply(o_frac.config, &err)) { std::cerr << err << '\n'; return 1; }
      return cmd_fracform(o_frac.grids, o_frac.truncation, o_frac.out, o_frac.assert_);
    }
    if (s_piola->parsed()) {
      if (!c_piola.apply(o_piola.config, &err)) { std::cerr << err << '\n'; return 1; }
      return cmd_piola(o_piola.out, o_piola.assert_);
    }
    if (s_solve->parsed()) {
      if (!c_solve.apply(o_solve.config, &err)) { std::cerr << err << '\n'; return 1; }
      return cmd_efie_solve(o_solve.mesh, o_solve.refine, o_solve.degree, o_solve.k, o_solve.quad,
                            o_solve.out, o_solve.assert_, o_solve.timings);
    }
    if (s_conv->parsed()) {
      if (!c_conv.apply(o_conv.config, &err)) { std::cerr << err << '\n'; return 1; }
      return cmd_convergence(o_conv.mesh, o_conv.levels, o_conv.degree, o_conv.k, o_conv.quad,
                             o_conv.out, o_conv.assert_, o_conv.timings);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace hpbem
