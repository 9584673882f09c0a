#pragma once

// Reference routes used by the verification suite: dense grid search over the
// out-of-plane vector (independent of the linear stationarity solve) and the
// Gram-matrix projection onto the affine-in-t span (independent of the moment
// operators).

#include "platelim/effective.hpp"
#include "platelim/relax.hpp"

namespace platelim {
namespace oracles {

// min over c (coarse-to-fine grid) of Q3(Abar^-1 [X + c x e3] Abar^-1).
// Refines the 3D grid around the best point down to `final_resolution`.
inline double grid_search_relaxed(const QuadForm3& q3, const SymMat3& abar,
                                  const SymMat2& x, double range = 8.0,
                                  double final_resolution = 1e-4) {
  const Mat3 ainv = abar.mat().inverse();
  const auto value = [&](const Vec3& c) {
    const Mat3 lift = SymMat3::embed(x).mat() + sym_outer_e3(c).mat();
    return q3(Mat3(ainv * lift * ainv));
  };
  Vec3 center = Vec3::Zero();
  double half = range;
  double best = value(center);
  const int side = 10;  // 21 points per axis
  while (half > final_resolution * side / 2) {
    Vec3 best_c = center;
    for (int i = -side; i <= side; ++i)
      for (int j = -side; j <= side; ++j)
        for (int k = -side; k <= side; ++k) {
          const Vec3 c = center + (half / side) * Vec3(i, j, k);
          const double v = value(c);
          if (v < best) {
            best = v;
            best_c = c;
          }
        }
    center = best_c;
    // The grid argmin of a convex quadratic is within one diagonal spacing of
    // the true argmin, so a 4x shrink always keeps it inside the new window.
    half /= 4;
  }
  return best;
}

struct AffineProjection {
  std::vector<SymMat2> projection;   // per t node
  SymMat2 const_part;                // w-projection of the field onto constants
  std::vector<SymMat2> ortho_part;   // projection minus const_part: the component
                                     // w-orthogonal to constants within affine fields
  double residual_norm_sq = 0;       // || field - projection ||_w^2
};

// Projects a sampled field onto the 6-dimensional span {Y + t Z} with the
// inner product <f, g>_w = sum_i w_i <L2_i f_i, g_i>; assembled directly as a
// Gram system over the monomial basis.
inline AffineProjection gram_affine_projection(std::span<const SymMat2> field,
                                               std::span<const QuadForm2> l2,
                                               const ThicknessQuadrature& quad) {
  const int n = quad.size();
  const auto basis = [&](int k, double t) -> SymMat2 {
    return (k < 3) ? sym2_basis(k) : sym2_basis(k - 3) * t;
  };
  Eigen::Matrix<double, 6, 6> gram = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
  for (int i = 0; i < n; ++i) {
    const double t = quad.nodes[i];
    for (int a = 0; a < 6; ++a) {
      rhs[a] += quad.weights[i] * l2[i].bilinear(basis(a, t), field[i]);
      for (int b = a; b < 6; ++b)
        gram(a, b) += quad.weights[i] * l2[i].bilinear(basis(a, t), basis(b, t));
    }
  }
  gram = gram.template selfadjointView<Eigen::Upper>();
  const Eigen::Matrix<double, 6, 1> coef = gram.ldlt().solve(rhs);
  const SymMat2 affine0 = SymMat2::from_vec(Vec3(coef[0], coef[1], coef[2]));
  const SymMat2 slope = SymMat2::from_vec(Vec3(coef[3], coef[4], coef[5]));

  // Projection of the field onto constants alone (3x3 Gram solve); constants
  // and the {t X - proj(t X)} span are w-orthogonal, so this splits the affine
  // projection.
  Mat3 gram_c = Mat3::Zero();
  Vec3 rhs_c = Vec3::Zero();
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a) {
      rhs_c[a] += quad.weights[i] * l2[i].bilinear(sym2_basis(a), field[i]);
      for (int b = 0; b < 3; ++b)
        gram_c(a, b) += quad.weights[i] * l2[i].bilinear(sym2_basis(a), sym2_basis(b));
    }

  AffineProjection out;
  out.const_part = SymMat2::from_vec(gram_c.ldlt().solve(rhs_c));
  out.projection.resize(n);
  out.ortho_part.resize(n);
  for (int i = 0; i < n; ++i) {
    out.projection[i] = affine0 + slope * quad.nodes[i];
    out.ortho_part[i] = out.projection[i] - out.const_part;
    const SymMat2 res = field[i] - out.projection[i];
    out.residual_norm_sq += quad.weights[i] * l2[i](res);
  }
  return out;
}

}  // namespace oracles
}  // namespace platelim
