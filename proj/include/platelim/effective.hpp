#pragma once

// Thickness-moment homogenization. With L2(x',t) the relaxed in-plane form
// and the prestrain moment field (Abar B)_2x2, this computes per midplane
// point:
//
//   phi1      = (L2*)^-1 (int t L2 dt)          projection of t X on constants
//   phi(F)    = (L2*)^-1 (int L2 F(t) dt)       projection on constants
//   V2(t)     = t Id - phi1
//   T2(t)     = V2^T L2 V2                       (self-adjoint by construction)
//   T2*       = int T2 dt,  n* = (T2*)^-1 int V2^T L2 N1 dt
//   R         = int <L2 N1, N1> dt - <T2* n*, n*>
//
// with N1 = (Abar B)_2x2 - phi((Abar B)_2x2). R is the squared distance (in
// the t-integrated L2 inner product) of the prestrain from the span of fields
// affine in t; n* is the preferred curvature.

#include <span>

#include "platelim/prestrain.hpp"
#include "platelim/relax.hpp"

namespace platelim {

struct MomentOperators {
  Mat3 l2_star = Mat3::Zero();
  Mat3 first_moment = Mat3::Zero();
  Mat3 phi1 = Mat3::Zero();

  SymMat2 apply_phi1(const SymMat2& x) const { return SymMat2::from_vec(phi1 * x.vec()); }
};

inline MomentOperators moments(std::span<const QuadForm2> l2,
                               const ThicknessQuadrature& quad) {
  if (static_cast<int>(l2.size()) != quad.size())
    throw Error("moments: sample/node count mismatch");
  MomentOperators mo;
  for (int i = 0; i < quad.size(); ++i) {
    mo.l2_star += quad.weights[i] * l2[i].matrix();
    mo.first_moment += quad.weights[i] * quad.nodes[i] * l2[i].matrix();
  }
  Eigen::FullPivLU<Mat3> lu(mo.l2_star);
  if (!lu.isInvertible()) throw SingularL2Star("moments: int L2 dt is singular");
  mo.phi1 = lu.solve(mo.first_moment);
  return mo;
}

// phi applied to a sampled field: (L2*)^-1 sum_i w_i L2_i X_i.
inline SymMat2 apply_phi(const MomentOperators& mo, std::span<const QuadForm2> l2,
                         std::span<const SymMat2> field, const ThicknessQuadrature& quad) {
  Vec3 rhs = Vec3::Zero();
  for (int i = 0; i < quad.size(); ++i)
    rhs += quad.weights[i] * (l2[i].matrix() * field[i].vec());
  return SymMat2::from_vec(mo.l2_star.fullPivLu().solve(rhs));
}

struct PlatePoint {
  QuadForm2 t2_star;
  SymMat2 n_star;
  double residue = 0;
  MomentOperators mo;
  SymMat2 phi_ab;                 // phi((Abar B)_2x2)
  double n1_energy = 0;           // int <L2 N1, N1> dt
  std::vector<SymMat2> n1;        // N1 at each t node
  std::vector<QuadForm2> l2;      // relaxed form at each t node

  // Optimal in-plane strain for curvature H: phi((Abar B)_2x2) - phi1(H).
  SymMat2 optimal_in_plane(const SymMat2& h) const {
    return phi_ab - mo.apply_phi1(h);
  }
};

inline PlatePoint effective_point(std::span<const SymMat2> ab2x2,
                                  std::span<const QuadForm2> l2,
                                  const ThicknessQuadrature& quad) {
  const int n = quad.size();
  if (static_cast<int>(ab2x2.size()) != n || static_cast<int>(l2.size()) != n)
    throw Error("effective_point: sample/node count mismatch");
  PlatePoint p;
  p.mo = moments(l2, quad);
  p.phi_ab = apply_phi(p.mo, l2, ab2x2, quad);

  p.n1.reserve(n);
  Mat3 t2_star = Mat3::Zero();
  Vec3 rhs = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    p.n1.push_back(ab2x2[i] - p.phi_ab);
    const Mat3 v2 = quad.nodes[i] * Mat3::Identity() - p.mo.phi1;
    const Mat3 t2 = v2.transpose() * l2[i].matrix() * v2;
    t2_star += quad.weights[i] * t2;
    rhs += quad.weights[i] * (v2.transpose() * (l2[i].matrix() * p.n1[i].vec()));
    p.n1_energy += quad.weights[i] * l2[i](p.n1[i]);
  }
  t2_star = 0.5 * (t2_star + t2_star.transpose()).eval();
  Eigen::LDLT<Mat3> ldlt(t2_star);
  Eigen::SelfAdjointEigenSolver<Mat3> es(t2_star);
  if (ldlt.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
    throw SingularT2Star("effective_point: T2* not positive definite (degenerate quadrature?)");
  p.t2_star = QuadForm2(t2_star);
  p.n_star = SymMat2::from_vec(ldlt.solve(rhs));
  p.residue = p.n1_energy - p.n_star.vec().dot(t2_star * p.n_star.vec());
  p.l2.assign(l2.begin(), l2.end());
  return p;
}

struct PlateModel {
  Grid2 grid;
  ThicknessQuadrature quad;
  std::vector<PlatePoint> pts;
};

inline PlateModel effective_model(const Grid2& grid, const PrestrainField& prestrain,
                                  const Q3Field& q3field, const ThicknessQuadrature& quad,
                                  int threads = 1) {
  PlateModel model;
  model.grid = grid;
  model.quad = quad;
  model.pts.resize(grid.count());
  parallel_for(grid.count(), threads, [&](int n) {
    const int i = n % grid.nx, j = n / grid.nx;
    const Vec2 x = grid.point(i, j);
    const SymMat3 abar = prestrain.abar(x);
    std::vector<SymMat2> ab(quad.size());
    std::vector<QuadForm2> l2(quad.size());
    for (int k = 0; k < quad.size(); ++k) {
      const double t = quad.nodes[k];
      // (Abar B)_2x2; the product of two symmetric matrices need not be
      // symmetric, only its in-plane sym block enters.
      ab[k] = SymMat2(Mat2((abar.mat() * prestrain.b(x, t).mat()).topLeftCorner<2, 2>()));
      l2[k] = relax(q3field(x, t), abar).q2;
    }
    model.pts[n] = effective_point(ab, l2, quad);
  });
  return model;
}

// Verifies the projection decomposition of the residue at one point:
//   R = ||ab||_w^2 - ||phi(ab)||_{L2*}^2 - ||t n* - phi(t n*)||_w^2
// and the w-orthogonality of V2 X to constant fields. Returns the largest
// violation.
inline double residue_certificate(const PlatePoint& p, std::span<const SymMat2> ab2x2,
                                  const ThicknessQuadrature& quad) {
  const int n = quad.size();
  double norm_ab = 0, norm_lin = 0;
  for (int i = 0; i < n; ++i) {
    norm_ab += quad.weights[i] * p.l2[i](ab2x2[i]);
    const Mat3 v2 = quad.nodes[i] * Mat3::Identity() - p.mo.phi1;
    const SymMat2 vn = SymMat2::from_vec(v2 * p.n_star.vec());
    norm_lin += quad.weights[i] * p.l2[i](vn);
  }
  const double norm_const = p.phi_ab.vec().dot(p.mo.l2_star * p.phi_ab.vec());
  double violation = std::abs(p.residue - (norm_ab - norm_const - norm_lin));

  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m) {
      double ip = 0;
      for (int i = 0; i < n; ++i) {
        const Mat3 v2 = quad.nodes[i] * Mat3::Identity() - p.mo.phi1;
        const Vec3 vx = v2 * sym2_basis(k).vec();
        ip += quad.weights[i] * sym2_basis(m).vec().dot(p.l2[i].matrix() * vx);
      }
      violation = std::max(violation, std::abs(ip));
    }
  return violation;
}

inline double residue_certificate(const PlateModel& model, const PrestrainField& prestrain) {
  double worst = 0;
  for (int j = 0; j < model.grid.ny; ++j)
    for (int i = 0; i < model.grid.nx; ++i) {
      const Vec2 x = model.grid.point(i, j);
      const SymMat3 abar = prestrain.abar(x);
      std::vector<SymMat2> ab(model.quad.size());
      for (int k = 0; k < model.quad.size(); ++k)
        ab[k] = SymMat2(Mat2(
            (abar.mat() * prestrain.b(x, model.quad.nodes[k]).mat()).topLeftCorner<2, 2>()));
      worst = std::max(worst,
                       residue_certificate(model.pts[model.grid.idx(i, j)], ab, model.quad));
    }
  return worst;
}

}  // namespace platelim
