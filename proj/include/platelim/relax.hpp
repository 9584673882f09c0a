#pragma once

// Plane-stress relaxation: Q2(X) = min_c Q3(Abar^-1 [X + c x e3] Abar^-1).
// The minimizing c is linear in X; stationarity says the third column of the
// pushed-forward stress Abar^-1 (L S) Abar^-1 vanishes, which is a 3x3 SPD
// solve per basis direction.

#include "platelim/quadform.hpp"

namespace platelim {

struct RelaxedForm {
  QuadForm2 q2;
  Mat3 c_of = Mat3::Zero();  // columns: c_min for the orthonormal 2x2 basis
  SymMat3 abar;

  Vec3 c_min(const SymMat2& x) const { return c_of * x.vec(); }
};

inline RelaxedForm relax(const QuadForm3& q3, const SymMat3& abar) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(abar.mat());
  if (es.eigenvalues().minCoeff() <= 0)
    throw SingularAbar("relax: Abar is not symmetric positive definite");
  const Mat3 ainv = abar.mat().inverse();

  // Lift directions K_j = Abar^-1 sym(e_j x e3) Abar^-1.
  SymMat3 K[3];
  for (int j = 0; j < 3; ++j)
    K[j] = SymMat3(Mat3(ainv * sym_outer_e3(Vec3::Unit(j)).mat() * ainv));

  Mat3 M;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) M(j, l) = q3.bilinear(K[j], K[l]);
  Eigen::LDLT<Mat3> ldlt(M);
  if (ldlt.info() != Eigen::Success || std::abs(M.determinant()) < 1e-14 * (1 + M.cwiseAbs().maxCoeff()))
    throw SingularStationaritySystem("relax: degenerate out-of-plane stationarity system");

  RelaxedForm rf;
  rf.abar = abar;
  Mat3 q2m;
  SymMat3 lifted[3];
  for (int k = 0; k < 3; ++k) {
    const SymMat3 P = SymMat3(Mat3(ainv * SymMat3::embed(sym2_basis(k)).mat() * ainv));
    Vec3 r;
    for (int j = 0; j < 3; ++j) r[j] = q3.bilinear(P, K[j]);
    const Vec3 c = ldlt.solve(-r);
    rf.c_of.col(k) = c;
    lifted[k] = P + c[0] * K[0] + c[1] * K[1] + c[2] * K[2];
  }
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) q2m(k, l) = q3.bilinear(lifted[k], lifted[l]);
  rf.q2 = QuadForm2(Mat3(0.5 * (q2m + q2m.transpose())));
  return rf;
}

// sym(iota(X) + c_min(X) x e3): the 3x3 strain whose conjugation by Abar^-1
// realizes the relaxed energy q2(X).
inline SymMat3 relaxed_lift(const RelaxedForm& rf, const SymMat2& x) {
  return SymMat3::embed(x) + sym_outer_e3(rf.c_min(x));
}

}  // namespace platelim
