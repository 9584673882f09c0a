#pragma once

// Quadratic forms on symmetric 3x3 / 2x2 matrices, stored as operators in the
// orthonormal coordinate basis. Evaluation on a general matrix sees only its
// symmetric part.

#include <functional>

#include "platelim/symmat.hpp"

namespace platelim {

class QuadForm3 {
 public:
  QuadForm3() : L_(Mat6::Zero()) {}
  explicit QuadForm3(const Mat6& L) : L_(L) {}

  static QuadForm3 from_action(const std::function<SymMat3(const SymMat3&)>& a) {
    Mat6 L;
    for (int k = 0; k < 6; ++k) L.col(k) = a(sym3_basis(k)).vec();
    return QuadForm3(L);
  }

  // Action X -> 2 mu X + lambda tr(X) Id, i.e. Q3(F) = 2 mu |sym F|^2 + lambda tr^2 F.
  static QuadForm3 isotropic(double mu, double lambda) {
    return from_action([mu, lambda](const SymMat3& x) {
      return SymMat3(Mat3(2.0 * mu * x.mat() + lambda * x.trace() * Mat3::Identity()));
    });
  }

  static QuadForm3 identity() { return QuadForm3(Mat6::Identity()); }

  const Mat6& matrix() const { return L_; }

  SymMat3 apply(const SymMat3& x) const { return SymMat3::from_vec(L_ * x.vec()); }

  double operator()(const SymMat3& x) const {
    const Vec6 v = x.vec();
    return v.dot(L_ * v);
  }
  double operator()(const Mat3& f) const { return (*this)(SymMat3(f)); }

  double bilinear(const SymMat3& x, const SymMat3& y) const {
    return x.vec().dot(L_ * y.vec());
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat6> es(0.5 * (L_ + L_.transpose()));
    return es.eigenvalues().minCoeff();
  }
  double max_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat6> es(0.5 * (L_ + L_.transpose()));
    return es.eigenvalues().maxCoeff();
  }
  double self_adjoint_defect() const { return (L_ - L_.transpose()).cwiseAbs().maxCoeff(); }

 private:
  Mat6 L_;
};

class QuadForm2 {
 public:
  QuadForm2() : L_(Mat3::Zero()) {}
  explicit QuadForm2(const Mat3& L) : L_(L) {}

  static QuadForm2 from_action(const std::function<SymMat2(const SymMat2&)>& a) {
    Mat3 L;
    for (int k = 0; k < 3; ++k) L.col(k) = a(sym2_basis(k)).vec();
    return QuadForm2(L);
  }

  static QuadForm2 isotropic(double mu, double lambda) {
    return from_action([mu, lambda](const SymMat2& x) {
      return SymMat2(Mat2(2.0 * mu * x.mat() + lambda * x.trace() * Mat2::Identity()));
    });
  }

  const Mat3& matrix() const { return L_; }

  SymMat2 apply(const SymMat2& x) const { return SymMat2::from_vec(L_ * x.vec()); }

  double operator()(const SymMat2& x) const {
    const Vec3 v = x.vec();
    return v.dot(L_ * v);
  }
  double operator()(const Mat2& f) const { return (*this)(SymMat2(f)); }

  double bilinear(const SymMat2& x, const SymMat2& y) const {
    return x.vec().dot(L_ * y.vec());
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (L_ + L_.transpose()));
    return es.eigenvalues().minCoeff();
  }
  double self_adjoint_defect() const { return (L_ - L_.transpose()).cwiseAbs().maxCoeff(); }

 private:
  Mat3 L_;
};

inline double apply_form(const QuadForm3& q, const Mat3& f) { return q(f); }
inline double apply_form(const QuadForm2& q, const Mat2& f) { return q(f); }

// Random SPD form with spectrum in [lo, hi]; used by randomized suites.
inline QuadForm3 random_spd_form3(std::mt19937_64& rng, double lo = 0.5, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat6 basis;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) basis(i, j) = n(rng);
  const Eigen::HouseholderQR<Mat6> qr(basis);
  const Mat6 q = qr.householderQ();
  Vec6 ev;
  for (int i = 0; i < 6; ++i) ev[i] = u(rng);
  return QuadForm3(Mat6(q * ev.asDiagonal() * q.transpose()));
}

inline QuadForm2 random_spd_form2(std::mt19937_64& rng, double lo = 0.5, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat3 basis;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) basis(i, j) = n(rng);
  const Eigen::HouseholderQR<Mat3> qr(basis);
  const Mat3 q = qr.householderQ();
  Vec3 ev;
  for (int i = 0; i < 3; ++i) ev[i] = u(rng);
  return QuadForm2(Mat3(q * ev.asDiagonal() * q.transpose()));
}

}  // namespace platelim
