#pragma once

// Constrained-minimization gap (restricting the in-plane offset to symmetric
// gradient fields) and the pathological prestrain families: zero-energy
// constructions whose prestrain is much larger than the thickness, the
// nearest-rotation comparison for commuting SPD pairs, and order-h
// diagnostics for the prestrain-metric norms.

#include <cmath>

#include "platelim/ansatz.hpp"
#include "platelim/effective.hpp"

namespace platelim {

// ---------------------------------------------------------------------------
// Gradient-restricted vs pointwise-free minimization.

struct GapOptions {
  int max_iter = 20000;
  double rel_tol = 1e-12;
  double required_tol = 1e-10;  // stall threshold
};

struct GapResult {
  double restricted = 0;
  double unrestricted = 0;
  double gap = 0;
  int iterations = 0;
  double residual = 0;
};

namespace detail {

struct GapCells {
  int nx = 0, ny = 0;  // node counts
  double dx = 0, dy = 0, area = 0;
  std::vector<Mat3> lbar;   // per cell
  std::vector<Vec3> bbar;   // per cell
  std::vector<double> cbar; // per cell
};

// Cell-centered symmetric gradient of the nodal 2-vector field; the stencil
// is exact for quadratic g, and has no checkerboard null modes.
inline Vec3 cell_strain(const GapCells& c, const std::vector<Vec2>& g, int i, int j) {
  const int nx = c.nx;
  const Vec2 g00 = g[j * nx + i], g10 = g[j * nx + i + 1];
  const Vec2 g01 = g[(j + 1) * nx + i], g11 = g[(j + 1) * nx + i + 1];
  const Vec2 gx = ((g10 - g00) + (g11 - g01)) / (2 * c.dx);
  const Vec2 gy = ((g01 - g00) + (g11 - g10)) / (2 * c.dy);
  return Vec3(gx[0], gy[1], (gx[1] + gy[0]) / kSqrt2);
}

inline void cell_scatter(const GapCells& c, const Vec3& sigma, int i, int j,
                         std::vector<Vec2>& force) {
  const double cx[4] = {-1 / (2 * c.dx), 1 / (2 * c.dx), -1 / (2 * c.dx), 1 / (2 * c.dx)};
  const double cy[4] = {-1 / (2 * c.dy), -1 / (2 * c.dy), 1 / (2 * c.dy), 1 / (2 * c.dy)};
  const int nodes[4] = {j * c.nx + i, j * c.nx + i + 1, (j + 1) * c.nx + i,
                        (j + 1) * c.nx + i + 1};
  for (int k = 0; k < 4; ++k) {
    force[nodes[k]][0] += cx[k] * sigma[0] + cy[k] * sigma[2] / kSqrt2;
    force[nodes[k]][1] += cy[k] * sigma[1] + cx[k] * sigma[2] / kSqrt2;
  }
}

}  // namespace detail

inline GapResult restricted_gap(const PrestrainField& pre, const Q3Field& q3f,
                                const Grid2& grid, const ThicknessQuadrature& quad,
                                int threads = 1, const GapOptions& opt = {}) {
  {
    const Mat3 a0 = pre.abar(Vec2(0.3, 0.4)).mat();
    if ((a0 - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-12)
      throw Error("restricted_gap: flat reference requires Abar = Id");
  }
  detail::GapCells cells;
  cells.nx = grid.nx;
  cells.ny = grid.ny;
  cells.dx = grid.dx;
  cells.dy = grid.dy;
  cells.area = grid.dx * grid.dy;
  const int ncell = (grid.nx - 1) * (grid.ny - 1);
  cells.lbar.resize(ncell);
  cells.bbar.resize(ncell);
  cells.cbar.resize(ncell);
  parallel_for(ncell, threads, [&](int cidx) {
    const int i = cidx % (grid.nx - 1), j = cidx / (grid.nx - 1);
    const Vec2 xc = grid.point(i, j) + 0.5 * Vec2(grid.dx, grid.dy);
    Mat3 lbar = Mat3::Zero();
    Vec3 bbar = Vec3::Zero();
    double cbar = 0;
    for (int k = 0; k < quad.size(); ++k) {
      const double t = quad.nodes[k];
      const QuadForm2 l2 = relax(q3f(xc, t), SymMat3::identity()).q2;
      const Vec3 bv = pre.b(xc, t).block2x2().vec();
      lbar += quad.weights[k] * l2.matrix();
      bbar += quad.weights[k] * (l2.matrix() * bv);
      cbar += quad.weights[k] * bv.dot(l2.matrix() * bv);
    }
    cells.lbar[cidx] = lbar;
    cells.bbar[cidx] = bbar;
    cells.cbar[cidx] = cbar;
  });

  // Gauge pins: both components at node (0,0), transverse component at
  // (nx-1, 0). The energy only sees sym grad g, so pinning the infinitesimal
  // rigid motions does not change the minimum.
  std::vector<bool> pinned(2 * grid.count(), false);
  pinned[2 * grid.idx(0, 0)] = pinned[2 * grid.idx(0, 0) + 1] = true;
  pinned[2 * grid.idx(grid.nx - 1, 0) + 1] = true;

  const auto apply_h = [&](const std::vector<Vec2>& g, std::vector<Vec2>& out) {
    for (auto& v : out) v.setZero();
    for (int j = 0; j < grid.ny - 1; ++j)
      for (int i = 0; i < grid.nx - 1; ++i) {
        const int cidx = j * (grid.nx - 1) + i;
        const Vec3 eps = detail::cell_strain(cells, g, i, j);
        detail::cell_scatter(cells, Vec3(2 * cells.area * (cells.lbar[cidx] * eps)), i, j,
                             out);
      }
    for (int n = 0; n < grid.count(); ++n)
      for (int c = 0; c < 2; ++c)
        if (pinned[2 * n + c]) out[n][c] = 0;
  };

  std::vector<Vec2> rhs(grid.count(), Vec2::Zero());
  for (int j = 0; j < grid.ny - 1; ++j)
    for (int i = 0; i < grid.nx - 1; ++i) {
      const int cidx = j * (grid.nx - 1) + i;
      detail::cell_scatter(cells, Vec3(2 * cells.area * cells.bbar[cidx]), i, j, rhs);
    }
  for (int n = 0; n < grid.count(); ++n)
    for (int c = 0; c < 2; ++c)
      if (pinned[2 * n + c]) rhs[n][c] = 0;

  // Jacobi preconditioner from the per-cell strain columns.
  std::vector<Vec2> diag(grid.count(), Vec2::Zero());
  {
    const double cxk[4] = {-1 / (2 * cells.dx), 1 / (2 * cells.dx), -1 / (2 * cells.dx),
                           1 / (2 * cells.dx)};
    const double cyk[4] = {-1 / (2 * cells.dy), -1 / (2 * cells.dy), 1 / (2 * cells.dy),
                           1 / (2 * cells.dy)};
    for (int j = 0; j < grid.ny - 1; ++j)
      for (int i = 0; i < grid.nx - 1; ++i) {
        const int cidx = j * (grid.nx - 1) + i;
        const int nodes[4] = {grid.idx(i, j), grid.idx(i + 1, j), grid.idx(i, j + 1),
                              grid.idx(i + 1, j + 1)};
        for (int k = 0; k < 4; ++k) {
          const Vec3 d0(cxk[k], 0, cyk[k] / kSqrt2);
          const Vec3 d1(0, cyk[k], cxk[k] / kSqrt2);
          diag[nodes[k]][0] += 2 * cells.area * d0.dot(cells.lbar[cidx] * d0);
          diag[nodes[k]][1] += 2 * cells.area * d1.dot(cells.lbar[cidx] * d1);
        }
      }
  }

  std::vector<Vec2> g(grid.count(), Vec2::Zero()), r = rhs, z(grid.count()),
      p(grid.count()), hp(grid.count());
  const auto precond = [&](const std::vector<Vec2>& in, std::vector<Vec2>& out) {
    for (int n = 0; n < grid.count(); ++n)
      for (int c = 0; c < 2; ++c)
        out[n][c] = (diag[n][c] > 0 && !pinned[2 * n + c]) ? in[n][c] / diag[n][c] : 0.0;
  };
  const auto dot = [&](const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double s = 0;
    for (int n = 0; n < grid.count(); ++n) s += a[n].dot(b[n]);
    return s;
  };
  precond(r, z);
  p = z;
  double rz = dot(r, z);
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  GapResult res;
  double rel = 1.0;
  if (rhs_norm < 1e-300) rel = 0.0;
  int it = 0;
  for (; it < opt.max_iter && rel > opt.rel_tol; ++it) {
    apply_h(p, hp);
    const double php = dot(p, hp);
    if (php <= 0) break;
    const double alpha = rz / php;
    for (int n = 0; n < grid.count(); ++n) {
      g[n] += alpha * p[n];
      r[n] -= alpha * hp[n];
    }
    rel = std::sqrt(dot(r, r)) / rhs_norm;
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int n = 0; n < grid.count(); ++n) p[n] = z[n] + beta * p[n];
  }
  res.iterations = it;
  res.residual = rel;
  if (rel > opt.required_tol)
    throw SolverStall("restricted_gap: CG residual " + std::to_string(rel) +
                      " after " + std::to_string(it) + " iterations");

  double restricted = 0, unrestricted = 0;
  for (int j = 0; j < grid.ny - 1; ++j)
    for (int i = 0; i < grid.nx - 1; ++i) {
      const int cidx = j * (grid.nx - 1) + i;
      const Vec3 eps = detail::cell_strain(cells, g, i, j);
      restricted += cells.area * (eps.dot(cells.lbar[cidx] * eps) -
                                  2 * cells.bbar[cidx].dot(eps) + cells.cbar[cidx]);
      const Vec3 sfree = cells.lbar[cidx].fullPivLu().solve(cells.bbar[cidx]);
      unrestricted += cells.area * (cells.cbar[cidx] - cells.bbar[cidx].dot(sfree));
    }
  res.restricted = restricted;
  res.unrestricted = unrestricted;
  res.gap = restricted - unrestricted;
  return res;
}

// ---------------------------------------------------------------------------
// Zero-energy constructions with prestrain much larger than the thickness.

struct CylinderExampleReport {
  double h = 0, alpha = 0;
  double total_energy = 0;
  double max_pointwise_energy = 0;
  double surface_amplitude = 0;  // prestrain amplitude at z = h/2: (1/2) h^(1-alpha)
  double l2_defect_sq = 0;       // ||A^h - Id||^2 over the physical slab
};

// Rolled-up sheet with wavelength h^alpha; the deformation realizes its own
// prestrain exactly, so the energy vanishes pointwise for every alpha.
inline CylinderExampleReport example_cylinder(double h, double alpha, int n_grid = 24,
                                              int n_t = 8) {
  if (alpha < 0) throw Error("example_cylinder: alpha must be >= 0");
  const double lam = std::pow(h, -alpha);
  Deformation3D def;
  def.h = h;
  def.family = "rolled-cylinder";
  def.value = [lam, h](const Vec2& x, double t) {
    const Vec3 nu(std::cos(lam * x[0]), std::sin(lam * x[0]), 0.0);
    return Vec3(std::cos(lam * x[0]) / lam, std::sin(lam * x[0]) / lam, x[1]) +
           (h * t) * nu;
  };
  def.grad_scaled = [lam, h](const Vec2& x, double t) {
    Mat3 f;
    const double c = std::cos(lam * x[0]), s = std::sin(lam * x[0]);
    f.col(0) = (1.0 + h * t * lam) * Vec3(-s, c, 0.0);
    f.col(1) = Vec3(0, 0, 1);
    f.col(2) = Vec3(c, s, 0.0);
    return f;
  };
  const double amp = h / std::pow(h, alpha);  // z/h^alpha at z = h, per unit t
  const auto a_h = [amp](const Vec2&, double t) {
    Mat3 a = Mat3::Identity();
    a(0, 0) += t * amp;
    return a;
  };
  const Grid2 grid = Grid2::unit(n_grid, n_grid);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(n_t);
  const Energy3DReport er =
      energy3d_report(def, a_h, builtin_dist_law(), grid, quad, 1);
  CylinderExampleReport rep;
  rep.h = h;
  rep.alpha = alpha;
  rep.total_energy = er.value * h * h;  // E^h itself
  rep.max_pointwise_energy = er.max_point * h * h;
  rep.surface_amplitude = 0.5 * std::pow(h, 1.0 - alpha);
  rep.l2_defect_sq = std::pow(h, 3.0 - 2.0 * alpha) / 12.0;  // exact moment arithmetic
  return rep;
}

struct CornerExampleReport {
  double h = 0, lambda = 0, r = 0;
  double max_pointwise_energy = 0;
  double sup_metric_defect = 0;       // sampled sup of |(A^h)^T A^h - Id| on the arc
  double expected_sup_defect = 0;     // (1 + t_max/lambda)^2 - 1 at the deepest node
  double l1_metric_defect = 0;        // L^1(Omega^h), exact in the arc variable
  double curvature_peak = 0;          // discrete |II| at the crease
  double expected_curvature = 0;      // 1/r
};

// Flat / quarter-cylinder of radius r = lambda h / flat. The limit has a
// right-angle crease; the energy is zero for the polar-factor prestrain.
inline CornerExampleReport example_corner(double h, double lambda, int n_arc = 192,
                                          int n_t = 8) {
  const double r = lambda * h;
  if (!(r < 0.25)) throw GeometryOverlap("example_corner: r = lambda h must be < 1/4");
  const double xm = 0.5 * (1.0 - M_PI * r / 2.0);
  CornerExampleReport rep;
  rep.h = h;
  rep.lambda = lambda;
  rep.r = r;
  rep.expected_curvature = 1.0 / r;

  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(n_t);
  const ElasticLaw law = builtin_dist_law();
  double tmax = 0;
  for (double t : quad.nodes) tmax = std::max(tmax, std::abs(t));
  rep.expected_sup_defect = (1.0 + tmax / lambda) * (1.0 + tmax / lambda) - 1.0;

  // On the arc everything depends on (theta, t) only.
  for (int a = 0; a < n_arc; ++a) {
    const double theta = (a + 0.5) * (M_PI / 2) / n_arc;
    const Mat3 q = [&] {
      Mat3 m;
      m.col(0) = Vec3(std::cos(theta), 0, std::sin(theta));
      m.col(1) = Vec3(0, 1, 0);
      m.col(2) = Vec3(-std::sin(theta), 0, std::cos(theta));
      return m;
    }();
    for (int k = 0; k < quad.size(); ++k) {
      const double t = quad.nodes[k];
      Mat3 a_h = Mat3::Identity();
      a_h(0, 0) -= t / lambda;  // h t / r
      const Mat3 f = q * a_h;
      const double w = law.w(Vec2(0, 0), t, Mat3(f * a_h.inverse()));
      rep.max_pointwise_energy = std::max(rep.max_pointwise_energy, w);
      const double defect = std::abs((1 - t / lambda) * (1 - t / lambda) - 1.0);
      rep.sup_metric_defect = std::max(rep.sup_metric_defect, defect);
    }
  }
  // L^1(Omega^h): the integrand is theta-independent; arc width is pi r / 2.
  double l1 = 0;
  for (int k = 0; k < quad.size(); ++k) {
    const double t = quad.nodes[k];
    l1 += quad.weights[k] * std::abs((1 - t / lambda) * (1 - t / lambda) - 1.0);
  }
  rep.l1_metric_defect = (M_PI * r / 2.0) * h * l1;

  // Discrete curvature across the crease from the sampled midplane.
  SurfaceFamily mid;
  mid.name = "corner-midplane";
  mid.value = [xm, r](const Vec2& x) {
    const double xp = 0.5 * (1.0 + M_PI * r / 2.0);
    if (x[0] <= xm) return Vec3(x[0], x[1], 0.0);
    if (x[0] >= xp) return Vec3(xm + r, x[1], r + x[0] - xp);
    const double th = (x[0] - xm) / r;
    return Vec3(xm + r * std::sin(th), x[1], r * (1.0 - std::cos(th)));
  };
  const double halfwin = M_PI * r;  // window around the crease
  const Grid2 win = Grid2::box(0.5 - halfwin, 0.5 + halfwin, 0.0, 1.0, 257, 5);
  const Midsurface s = build_surface(mid, win);
  for (const SymMat2& sf : s.second_form)
    rep.curvature_peak = std::max(rep.curvature_peak, std::abs(sf(0, 0)));
  return rep;
}

struct MetricSequenceRow {
  double h = 0;
  double l2_defect_sq = 0;        // ||A^h - Abar||^2_{L^2(Omega^h)}
  double l1_metric_defect = 0;    // ||(A^h)^T A^h - Abar^2||_{L^1(Omega^h)}
  double l2_metric_defect_sq = 0; // same defect, squared L^2
  double inplane_l1 = 0;          // in-plane 2x2 block of the metric defect, L^1
  double avg_grad_l2_sq = 0;      // ||mean_t grad u - Id||^2_{L^2(Omega^h)} (if grad given)
  double max_pointwise_energy = 0;
};

struct MetricSequenceReport {
  std::vector<MetricSequenceRow> rows;
  double l2_over_h3_exponent = 0;  // fitted slope of log(l2/h^3) vs log h
  double l1_exponent = 0;          // fitted slope of log(l1) vs log h
  double inplane_exponent = 0;
  double metric_l2_exponent = 0;
  double avg_grad_exponent = 0;    // of ||mean_t grad u - Abar||^2_{L^2(Omega^h)}
  bool divergence = false;         // l2/h^3 blows up
  bool h2_consistent = false;      // l1 ~ h^2
};

namespace detail {

inline double fit_exponent(const std::vector<double>& h, const std::vector<double>& v) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(v[i] > 1e-300)) continue;
    const double lx = std::log(h[i]), ly = std::log(v[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace detail

// Oscillating graph u^h = (x, y, h^alpha sin(h^-beta x)) + z nu. Zero energy
// with the polar-factor prestrain; the prestrain-to-thickness ratio diverges
// like h^(alpha - 2 beta) when alpha < 2 beta. Norms are exact one-period
// averages in the oscillation phase.
inline MetricSequenceReport example_oscillation(const std::vector<double>& h_list,
                                                double alpha, double beta,
                                                int n_theta = 2048, int n_t = 8) {
  if (!(alpha > 0) || !(beta > 0) || !(alpha - beta > 0) || alpha - 2 * beta <= -1.0 ||
      2 * alpha - 3 * beta <= -1.0)
    throw BadExponents("example_oscillation: exponents outside the construction's range");
  MetricSequenceReport rep;
  rep.divergence = (alpha - 2 * beta < 0);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(n_t);
  const ElasticLaw law = builtin_dist_law();
  std::vector<double> hs, l2h3, l1, ml2;
  for (double h : h_list) {
    const double a = std::pow(h, alpha), lam = std::pow(h, -beta);
    MetricSequenceRow row;
    row.h = h;
    for (int k = 0; k < n_theta; ++k) {
      const double th = 2 * M_PI * (k + 0.5) / n_theta;
      const double fp = a * lam * std::cos(th);
      const double fpp = -a * lam * lam * std::sin(th);
      const double q = std::sqrt(1 + fp * fp);
      Mat3 x0;
      x0 << 1, 0, -fp / q, 0, 1, 0, fp, 0, 1 / q;
      Mat3 y0 = Mat3::Zero();
      y0(0, 0) = -fpp / (q * q * q);
      y0(2, 0) = -fp * fpp / (q * q * q);
      for (int m = 0; m < quad.size(); ++m) {
        const double z = h * quad.nodes[m];
        const double w = h * quad.weights[m] / n_theta;  // dz dx measure
        const Mat3 grad = x0 + z * y0;
        const Mat3 ah = spd_sqrt(Mat3(grad.transpose() * grad));
        const Mat3 defect = ah - Mat3::Identity();
        const Mat3 mdef = grad.transpose() * grad - Mat3::Identity();
        row.l2_defect_sq += w * defect.squaredNorm();
        row.l1_metric_defect += w * mdef.norm();
        row.l2_metric_defect_sq += w * mdef.squaredNorm();
        const double wv = law.w(Vec2(0, 0), quad.nodes[m], Mat3(grad * ah.inverse()));
        row.max_pointwise_energy = std::max(row.max_pointwise_energy, wv);
      }
    }
    rep.rows.push_back(row);
    hs.push_back(h);
    l2h3.push_back(row.l2_defect_sq / (h * h * h));
    l1.push_back(row.l1_metric_defect);
    ml2.push_back(row.l2_metric_defect_sq);
  }
  rep.l2_over_h3_exponent = detail::fit_exponent(hs, l2h3);
  rep.l1_exponent = detail::fit_exponent(hs, l1);
  rep.metric_l2_exponent = detail::fit_exponent(hs, ml2);
  rep.divergence = rep.l2_over_h3_exponent < -0.02;
  rep.h2_consistent = rep.l1_exponent >= 1.9;
  return rep;
}

// ---------------------------------------------------------------------------
// Nearest rotation for commuting SPD pairs.

struct RotationGapResult {
  double direct = 0;       // ||A - M||_F
  double sampled_min = 0;  // min over sampled rotations (Id included)
  bool id_optimal = false;
};

inline RotationGapResult nearest_rotation_gap(const SymMat3& a, const SymMat3& m,
                                              int n_samples, std::uint64_t seed) {
  const Mat3 comm = a.mat() * m.mat() - m.mat() * a.mat();
  const double scale = 1.0 + a.norm() * m.norm();
  if (comm.cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotCommuting("nearest_rotation_gap: A and M do not commute");
  RotationGapResult res;
  res.direct = (a.mat() - m.mat()).norm();
  res.sampled_min = res.direct;  // Q = Id is always sampled
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n_samples; ++i) {
    const Mat3 q = random_rotation(rng);
    res.sampled_min = std::min(res.sampled_min, (a.mat() - q * m.mat()).norm());
  }
  res.id_optimal = res.sampled_min >= res.direct - 1e-12;
  return res;
}

// For non-commuting SPD pairs the polar factor of A M beats the identity.
inline Mat3 beating_rotation(const SymMat3& a, const SymMat3& m) {
  return procrustes_rotation(Mat3(a.mat() * m.mat()));
}

// ---------------------------------------------------------------------------
// Order-h diagnostics (metric closeness norms and exponent fits).

struct PrestrainSequence {
  std::string name;
  SymMat3 abar = SymMat3::identity();
  // Sampled in oscillation phase (th1, th2) and thickness t; h explicit.
  std::function<Mat3(double, double, double, double)> a_h;
  std::function<Mat3(double, double, double, double)> grad_u;  // optional
  bool osc_x = false, osc_y = false;
};

inline PrestrainSequence sequence_example1(double alpha) {
  PrestrainSequence s;
  s.name = "rolled-cylinder";
  s.a_h = [alpha](double, double, double t, double h) {
    Mat3 a = Mat3::Identity();
    a(0, 0) += t * std::pow(h, 1.0 - alpha);
    return a;
  };
  return s;
}

inline PrestrainSequence sequence_bounded(const SymMat3& abar, const TProfile& b) {
  PrestrainSequence s;
  s.name = "order-h";
  s.abar = abar;
  s.a_h = [abar, b](double, double, double t, double h) {
    return Mat3(abar.mat() + h * b.eval(t).mat());
  };
  return s;
}

// u = (x, y, z) + z h^alpha sin(h^-beta x) sin(h^-beta y) e3: the averaged
// gradient is close to a rotation while the pointwise metric bound fails.
inline PrestrainSequence sequence_checkerboard(double alpha, double beta) {
  PrestrainSequence s;
  s.name = "checkerboard";
  s.osc_x = s.osc_y = true;
  s.grad_u = [alpha, beta](double th1, double th2, double t, double h) {
    const double a = std::pow(h, alpha), lam = std::pow(h, -beta);
    const double z = h * t;
    Mat3 g = Mat3::Identity();
    g(2, 0) = z * a * lam * std::cos(th1) * std::sin(th2);
    g(2, 1) = z * a * lam * std::sin(th1) * std::cos(th2);
    g(2, 2) = 1 + a * std::sin(th1) * std::sin(th2);
    return g;
  };
  s.a_h = [seq_grad = s.grad_u](double th1, double th2, double t, double h) {
    const Mat3 g = seq_grad(th1, th2, t, h);
    return spd_sqrt(Mat3(g.transpose() * g));
  };
  return s;
}

inline MetricSequenceReport order_h_diagnostic(const PrestrainSequence& seq,
                                               const std::vector<double>& h_list,
                                               int n_theta = 192, int n_t = 8) {
  MetricSequenceReport rep;
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(n_t);
  const Mat3 metric0 = seq.abar.mat() * seq.abar.mat();
  const int n1 = seq.osc_x ? n_theta : 1;
  const int n2 = seq.osc_y ? n_theta : 1;
  std::vector<double> hs, l1, inp, l2, avg;
  for (double h : h_list) {
    MetricSequenceRow row;
    row.h = h;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        const double th1 = 2 * M_PI * (i + 0.5) / n1;
        const double th2 = 2 * M_PI * (j + 0.5) / n2;
        Mat3 avg_grad = Mat3::Zero();
        for (int k = 0; k < quad.size(); ++k) {
          const double t = quad.nodes[k];
          const double w = h * quad.weights[k] / (n1 * n2);
          const Mat3 a = seq.a_h(th1, th2, t, h);
          const Mat3 mdef = a.transpose() * a - metric0;
          row.l2_defect_sq += w * (a - seq.abar.mat()).squaredNorm();
          row.l1_metric_defect += w * mdef.norm();
          row.l2_metric_defect_sq += w * mdef.squaredNorm();
          row.inplane_l1 += w * mdef.topLeftCorner<2, 2>().norm();
          if (seq.grad_u) avg_grad += quad.weights[k] * seq.grad_u(th1, th2, t, h);
        }
        if (seq.grad_u)
          row.avg_grad_l2_sq +=
              (h / (n1 * n2)) * (avg_grad - seq.abar.mat()).squaredNorm();
      }
    rep.rows.push_back(row);
    hs.push_back(h);
    l1.push_back(row.l1_metric_defect);
    inp.push_back(row.inplane_l1);
    l2.push_back(row.l2_defect_sq);
    avg.push_back(row.avg_grad_l2_sq);
  }
  rep.l1_exponent = detail::fit_exponent(hs, l1);
  rep.inplane_exponent = detail::fit_exponent(hs, inp);
  rep.metric_l2_exponent = detail::fit_exponent(hs, l2);
  rep.avg_grad_exponent = detail::fit_exponent(hs, avg);
  rep.h2_consistent = rep.l1_exponent >= 1.9;
  return rep;
}

}  // namespace platelim
