#pragma once

// Discrete midsurfaces: sampled parametric charts with finite-difference
// geometry (tangent frame, unit normal, Cosserat director, second
// fundamental form).

#include <cmath>
#include <functional>
#include <utility>

#include "platelim/symmat.hpp"

namespace platelim {

// Parametric chart. `value` is required; the analytic extras power the 3D
// recovery constructions and stay empty for charts only used on grids.
struct SurfaceFamily {
  std::string name;
  std::function<Vec3(const Vec2&)> value;
  std::function<Mat32(const Vec2&)> jacobian;
  std::function<Vec3(const Vec2&)> normal;
  std::function<Mat32(const Vec2&)> normal_jacobian;
  // second_derivative(x, i, j) = d^2 y / dx_i dx_j
  std::function<Vec3(const Vec2&, int, int)> second_derivative;

  bool analytic() const {
    return static_cast<bool>(jacobian) && static_cast<bool>(normal) &&
           static_cast<bool>(normal_jacobian) && static_cast<bool>(second_derivative);
  }

  static SurfaceFamily plane() {
    SurfaceFamily s;
    s.name = "plane";
    s.value = [](const Vec2& x) { return Vec3(x[0], x[1], 0.0); };
    s.jacobian = [](const Vec2&) {
      Mat32 j;
      j << 1, 0, 0, 1, 0, 0;
      return j;
    };
    s.normal = [](const Vec2&) { return Vec3(0, 0, 1); };
    s.normal_jacobian = [](const Vec2&) { return Mat32::Zero(); };
    s.second_derivative = [](const Vec2&, int, int) { return Vec3::Zero(); };
    return s;
  }

  // Isometric cylinder of radius rho, curved along x1; II = diag(1/rho, 0).
  static SurfaceFamily cylinder(double rho) {
    if (!(rho > 0)) throw Error("cylinder: radius must be positive");
    SurfaceFamily s;
    s.name = "cylinder";
    s.value = [rho](const Vec2& x) {
      return Vec3(rho * std::sin(x[0] / rho), rho * (1.0 - std::cos(x[0] / rho)), x[1]);
    };
    s.jacobian = [rho](const Vec2& x) {
      Mat32 j;
      const double c = std::cos(x[0] / rho), sn = std::sin(x[0] / rho);
      j << c, 0, sn, 0, 0, 1;
      return j;
    };
    s.normal = [rho](const Vec2& x) {
      return Vec3(std::sin(x[0] / rho), -std::cos(x[0] / rho), 0.0);
    };
    s.normal_jacobian = [rho](const Vec2& x) {
      Mat32 j;
      const double c = std::cos(x[0] / rho), sn = std::sin(x[0] / rho);
      j << c / rho, 0, sn / rho, 0, 0, 0;
      return j;
    };
    s.second_derivative = [rho](const Vec2& x, int i, int j) {
      if (i == 0 && j == 0)
        return Vec3(-std::sin(x[0] / rho) / rho, std::cos(x[0] / rho) / rho, 0.0);
      return Vec3(0, 0, 0);
    };
    return s;
  }

  // Sphere patch; not an isometry of the flat metric (used to exercise the
  // isometry gate).
  static SurfaceFamily sphere_patch(double radius) {
    if (!(radius > 0)) throw Error("sphere_patch: radius must be positive");
    SurfaceFamily s;
    s.name = "sphere";
    s.value = [radius](const Vec2& x) {
      const double u = x[0] / radius, v = x[1] / radius;
      return radius * Vec3(std::cos(v) * std::sin(u), std::sin(v),
                           1.0 - std::cos(v) * std::cos(u));
    };
    return s;
  }

  // Rigidly moved copy R y + c (frame-invariance checks).
  SurfaceFamily moved(const Mat3& r, const Vec3& c) const {
    SurfaceFamily s = *this;
    s.name = name + "-moved";
    s.value = [v = value, r, c](const Vec2& x) { return Vec3(r * v(x) + c); };
    if (jacobian) s.jacobian = [j = jacobian, r](const Vec2& x) { return Mat32(r * j(x)); };
    if (normal) s.normal = [n = normal, r](const Vec2& x) { return Vec3(r * n(x)); };
    if (normal_jacobian)
      s.normal_jacobian = [nj = normal_jacobian, r](const Vec2& x) { return Mat32(r * nj(x)); };
    if (second_derivative)
      s.second_derivative = [d = second_derivative, r](const Vec2& x, int i, int j) {
        return Vec3(r * d(x, i, j));
      };
    return s;
  }
};

struct Midsurface {
  Grid2 grid;
  std::vector<Vec3> y, nu, b;
  std::vector<Mat32> grad_y, grad_b;
  std::vector<SymMat2> second_form;  // sym(grad_y^T grad_b)
};

namespace detail {

// Second-order finite differences of a nodal 3-vector field (central inside,
// one-sided on the boundary ring).
inline std::vector<Mat32> grid_gradient(const Grid2& g, const std::vector<Vec3>& f) {
  std::vector<Mat32> out(g.count());
  const auto at = [&](int i, int j) -> const Vec3& { return f[g.idx(i, j)]; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec3 dx, dy;
      if (i == 0)
        dx = (-3.0 * at(0, j) + 4.0 * at(1, j) - at(2, j)) / (2 * g.dx);
      else if (i == g.nx - 1)
        dx = (3.0 * at(i, j) - 4.0 * at(i - 1, j) + at(i - 2, j)) / (2 * g.dx);
      else
        dx = (at(i + 1, j) - at(i - 1, j)) / (2 * g.dx);
      if (j == 0)
        dy = (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2 * g.dy);
      else if (j == g.ny - 1)
        dy = (3.0 * at(i, j) - 4.0 * at(i, j - 1) + at(i, j - 2)) / (2 * g.dy);
      else
        dy = (at(i, j + 1) - at(i, j - 1)) / (2 * g.dy);
      Mat32 m;
      m.col(0) = dx;
      m.col(1) = dy;
      out[g.idx(i, j)] = m;
    }
  return out;
}

}  // namespace detail

// Cosserat director completing grad_y to a frame realizing the 3D metric G:
// (grad_y | b)^T (grad_y | b) = G. Requires grad_y^T grad_y = G_2x2.
inline Vec3 cosserat(const Mat32& grad_y, const SymMat3& g, double tol = 1e-6) {
  const Mat2 g2 = g.mat().topLeftCorner<2, 2>();
  const double mismatch = (grad_y.transpose() * grad_y - g2).cwiseAbs().maxCoeff();
  if (mismatch > tol)
    throw MetricMismatch("cosserat: grad_y^T grad_y deviates from G_2x2 by " +
                         std::to_string(mismatch));
  const Vec3 cross = grad_y.col(0).cross(grad_y.col(1));
  const double cn = cross.norm();
  if (cn < 1e-14) throw DegenerateSurface("cosserat: degenerate tangent plane");
  const Vec3 nu = cross / cn;
  const double det2 = g2.determinant();
  if (det2 <= 0) throw MetricMismatch("cosserat: G_2x2 not positive definite");
  const Vec2 shear(g(0, 2), g(1, 2));
  return grad_y * (g2.inverse() * shear) + std::sqrt(g.mat().determinant() / det2) * nu;
}

inline Midsurface build_surface(const SurfaceFamily& fam, const Grid2& grid,
                                const std::function<SymMat3(const Vec2&)>& metric = {},
                                double metric_tol = 1e-4) {
  if (grid.nx < 3 || grid.ny < 3) throw Error("build_surface: need at least a 3x3 grid");
  Midsurface s;
  s.grid = grid;
  s.y.resize(grid.count());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) s.y[grid.idx(i, j)] = fam.value(grid.point(i, j));
  s.grad_y = detail::grid_gradient(grid, s.y);

  s.nu.resize(grid.count());
  s.b.resize(grid.count());
  for (int n = 0; n < grid.count(); ++n) {
    const Vec3 cross = s.grad_y[n].col(0).cross(s.grad_y[n].col(1));
    const double cn = cross.norm();
    const double scale = s.grad_y[n].col(0).norm() * s.grad_y[n].col(1).norm();
    if (cn < 1e-10 * (1.0 + scale))
      throw DegenerateSurface("build_surface: |d1y x d2y| vanishes at node " +
                              std::to_string(n));
    s.nu[n] = cross / cn;
  }
  if (metric) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const int n = grid.idx(i, j);
        s.b[n] = cosserat(s.grad_y[n], metric(grid.point(i, j)), metric_tol);
      }
  } else {
    s.b = s.nu;  // Abar = Id
  }
  s.grad_b = detail::grid_gradient(grid, s.b);
  s.second_form.resize(grid.count());
  for (int n = 0; n < grid.count(); ++n)
    s.second_form[n] = SymMat2(Mat2(s.grad_y[n].transpose() * s.grad_b[n]));
  return s;
}

struct IsometryReport {
  std::vector<double> residual;  // ||grad_y^T grad_y - G_2x2||_F per node
  double max = 0;
};

inline IsometryReport isometry_residual(const Midsurface& s,
                                        const std::function<SymMat2(const Vec2&)>& g2) {
  IsometryReport rep;
  rep.residual.resize(s.grid.count());
  for (int j = 0; j < s.grid.ny; ++j)
    for (int i = 0; i < s.grid.nx; ++i) {
      const int n = s.grid.idx(i, j);
      const Mat2 defect =
          s.grad_y[n].transpose() * s.grad_y[n] - g2(s.grid.point(i, j)).mat();
      rep.residual[n] = defect.norm();
      rep.max = std::max(rep.max, rep.residual[n]);
    }
  return rep;
}

}  // namespace platelim
