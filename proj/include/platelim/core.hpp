#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace platelim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PLATELIM_ERROR_TYPE(Name) \
  struct Name : Error {           \
    using Error::Error;           \
  }

PLATELIM_ERROR_TYPE(FrameNotOrthogonal);
PLATELIM_ERROR_TYPE(SingularDeformation);
PLATELIM_ERROR_TYPE(BadModuli);
PLATELIM_ERROR_TYPE(HessianNotPSD);
PLATELIM_ERROR_TYPE(StepTooSmall);
PLATELIM_ERROR_TYPE(SingularAbar);
PLATELIM_ERROR_TYPE(SingularStationaritySystem);
PLATELIM_ERROR_TYPE(SingularL2Star);
PLATELIM_ERROR_TYPE(SingularT2Star);
PLATELIM_ERROR_TYPE(DegenerateSurface);
PLATELIM_ERROR_TYPE(MetricMismatch);
PLATELIM_ERROR_TYPE(InfiniteEnergy);
PLATELIM_ERROR_TYPE(BadTarget);
PLATELIM_ERROR_TYPE(PreconditionII);
PLATELIM_ERROR_TYPE(SingularPrestrain);
PLATELIM_ERROR_TYPE(GeometryOverlap);
PLATELIM_ERROR_TYPE(BadExponents);
PLATELIM_ERROR_TYPE(NotCommuting);
PLATELIM_ERROR_TYPE(SolverStall);
PLATELIM_ERROR_TYPE(ConfigError);

#undef PLATELIM_ERROR_TYPE

// Rectangular midplane lattice. Nodes are (i, j) with i fastest.
struct Grid2 {
  int nx = 2;
  int ny = 2;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 1.0;
  double dy = 1.0;

  static Grid2 unit(int nx, int ny) {
    if (nx < 2 || ny < 2) throw Error("Grid2: need at least 2x2 nodes");
    Grid2 g;
    g.nx = nx;
    g.ny = ny;
    g.dx = 1.0 / (nx - 1);
    g.dy = 1.0 / (ny - 1);
    return g;
  }

  static Grid2 box(double x0, double x1, double y0, double y1, int nx, int ny) {
    Grid2 g = unit(nx, ny);
    g.x0 = x0;
    g.y0 = y0;
    g.dx = (x1 - x0) / (nx - 1);
    g.dy = (y1 - y0) / (ny - 1);
    return g;
  }

  int count() const { return nx * ny; }
  int idx(int i, int j) const { return j * nx + i; }
  Vec2 point(int i, int j) const { return Vec2(x0 + i * dx, y0 + j * dy); }

  // Trapezoid quadrature weight of node (i, j).
  double trapezoid_weight(int i, int j) const {
    const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
    const double wy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
    return wx * wy * dx * dy;
  }
};

// Block-partitioned parallel loop with independent per-index writes; results
// are deterministic for any thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Order-independent deterministic sum: fixed pairwise reduction tree.
inline double pairwise_sum(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
    n = half;
  }
  return v[0];
}

}  // namespace platelim
