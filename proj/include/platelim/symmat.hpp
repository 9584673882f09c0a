#pragma once

// Symmetric 2x2 / 3x3 values and their orthonormal coordinate vectors.
// Basis convention: diagonal entries first, then off-diagonals scaled by
// sqrt(2), so that the Frobenius inner product of matrices equals the dot
// product of coordinate vectors.

#include <cmath>
#include <random>

#include "platelim/core.hpp"

namespace platelim {

inline constexpr double kSqrt2 = 1.4142135623730951;

inline Mat2 sym(const Mat2& m) { return 0.5 * (m + m.transpose()); }
inline Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }

class SymMat2 {
 public:
  SymMat2() : m_(Mat2::Zero()) {}
  explicit SymMat2(const Mat2& m) : m_(sym(m)) {}
  SymMat2(double a11, double a22, double a12) {
    m_ << a11, a12, a12, a22;
  }

  static SymMat2 identity() { return SymMat2(Mat2::Identity()); }
  static SymMat2 from_vec(const Vec3& v) {
    return SymMat2(v[0], v[1], v[2] / kSqrt2);
  }

  // (a11, a22, sqrt(2) a12)
  Vec3 vec() const { return Vec3(m_(0, 0), m_(1, 1), kSqrt2 * m_(0, 1)); }
  const Mat2& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace(); }
  double norm() const { return m_.norm(); }
  double inner(const SymMat2& o) const { return (m_.array() * o.m_.array()).sum(); }

  SymMat2 operator+(const SymMat2& o) const { return SymMat2(Mat2(m_ + o.m_)); }
  SymMat2 operator-(const SymMat2& o) const { return SymMat2(Mat2(m_ - o.m_)); }
  SymMat2 operator*(double s) const { return SymMat2(Mat2(s * m_)); }
  SymMat2 operator-() const { return SymMat2(Mat2(-m_)); }

 private:
  Mat2 m_;
};

inline SymMat2 operator*(double s, const SymMat2& m) { return m * s; }

class SymMat3 {
 public:
  SymMat3() : m_(Mat3::Zero()) {}
  explicit SymMat3(const Mat3& m) : m_(sym(m)) {}

  static SymMat3 identity() { return SymMat3(Mat3::Identity()); }
  static SymMat3 from_vec(const Vec6& v) {
    Mat3 m;
    m << v[0], v[3] / kSqrt2, v[4] / kSqrt2,  //
        v[3] / kSqrt2, v[1], v[5] / kSqrt2,   //
        v[4] / kSqrt2, v[5] / kSqrt2, v[2];
    return SymMat3(m);
  }
  // Embeds a 2x2 block into the top-left corner (iota).
  static SymMat3 embed(const SymMat2& x) {
    Mat3 m = Mat3::Zero();
    m.topLeftCorner<2, 2>() = x.mat();
    return SymMat3(m);
  }

  // (a11, a22, a33, sqrt2 a12, sqrt2 a13, sqrt2 a23)
  Vec6 vec() const {
    Vec6 v;
    v << m_(0, 0), m_(1, 1), m_(2, 2), kSqrt2 * m_(0, 1), kSqrt2 * m_(0, 2),
        kSqrt2 * m_(1, 2);
    return v;
  }
  const Mat3& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymMat2 block2x2() const { return SymMat2(Mat2(m_.topLeftCorner<2, 2>())); }

  double trace() const { return m_.trace(); }
  double norm() const { return m_.norm(); }
  double inner(const SymMat3& o) const { return (m_.array() * o.m_.array()).sum(); }

  SymMat3 operator+(const SymMat3& o) const { return SymMat3(Mat3(m_ + o.m_)); }
  SymMat3 operator-(const SymMat3& o) const { return SymMat3(Mat3(m_ - o.m_)); }
  SymMat3 operator*(double s) const { return SymMat3(Mat3(s * m_)); }
  SymMat3 operator-() const { return SymMat3(Mat3(-m_)); }

 private:
  Mat3 m_;
};

inline SymMat3 operator*(double s, const SymMat3& m) { return m * s; }

// sym(c ⊗ e3)
inline SymMat3 sym_outer_e3(const Vec3& c) {
  Mat3 m = Mat3::Zero();
  m.col(2) = c;
  return SymMat3(m);
}

// Orthonormal bases.
inline SymMat2 sym2_basis(int k) {
  switch (k) {
    case 0: return SymMat2(1, 0, 0);
    case 1: return SymMat2(0, 1, 0);
    default: return SymMat2(0, 0, 1.0 / kSqrt2);
  }
}

inline SymMat3 sym3_basis(int k) {
  Vec6 v = Vec6::Zero();
  v[k] = 1.0;
  return SymMat3::from_vec(v);
}

// Symmetric positive-semidefinite square root.
inline Mat3 spd_sqrt(const Mat3& c) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(sym(c));
  Vec3 ev = es.eigenvalues();
  for (int i = 0; i < 3; ++i) {
    if (ev[i] < 0 && ev[i] > -1e-13) ev[i] = 0;
    if (ev[i] < 0) throw Error("spd_sqrt: matrix has a negative eigenvalue");
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// Polar factor Q with F = Q sqrt(F^T F); Q in O(3), in SO(3) when det F > 0.
inline Mat3 polar_factor(const Mat3& f) {
  const Mat3 s = spd_sqrt(f.transpose() * f);
  Eigen::FullPivLU<Mat3> lu(s);
  if (!lu.isInvertible()) throw SingularDeformation("polar_factor: singular stretch");
  return f * lu.inverse();
}

// Rotation maximizing tr(Q^T m) over SO(3). The nearest-rotation witness.
inline Mat3 procrustes_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 q = svd.matrixU() * svd.matrixV().transpose();
  if (q.determinant() < 0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1;
    q = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return q;
}

// Squared Frobenius distance to SO(3): sum (sigma_i - 1)^2, with the smallest
// singular value sign-flipped on the reflection branch det F < 0.
inline double dist2_so3(const Mat3& f) {
  Eigen::JacobiSVD<Mat3> svd(f);
  const Vec3 s = svd.singularValues();  // descending
  double d = 0;
  for (int i = 0; i < 2; ++i) d += (s[i] - 1) * (s[i] - 1);
  const double last = (f.determinant() < 0) ? (s[2] + 1) : (s[2] - 1);
  return d + last * last;
}

// Assembles the frame [grad_y | nu] and verifies it lies in O(3).
inline Mat3 frame_of(const Mat32& grad_y, const Vec3& nu, double tol = 1e-8) {
  Mat3 q;
  q.leftCols<2>() = grad_y;
  q.col(2) = nu;
  const double defect = (q.transpose() * q - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (defect > tol)
    throw FrameNotOrthogonal("frame_of: Q^T Q deviates from identity by " +
                             std::to_string(defect));
  return q;
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4d q;
  do {
    q << n(rng), n(rng), n(rng), n(rng);
  } while (q.norm() < 1e-8);
  q.normalize();
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),  //
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),   //
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

inline SymMat3 random_sym3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
  return SymMat3(m);
}

inline SymMat2 random_sym2(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return SymMat2(u(rng), u(rng), u(rng));
}

inline Mat3 random_mat3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
  return m;
}

}  // namespace platelim
