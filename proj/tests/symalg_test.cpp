#include <gtest/gtest.h>

#include "platelim/quadform.hpp"
#include "platelim/surface.hpp"

using namespace platelim;

TEST(SymVec, IdentityDiagonalFirst) {
  const Vec6 v = SymMat3::identity().vec();
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], 1.0);
  EXPECT_DOUBLE_EQ(v[2], 1.0);
  EXPECT_DOUBLE_EQ(v[3], 0.0);
  EXPECT_DOUBLE_EQ(v[4], 0.0);
  EXPECT_DOUBLE_EQ(v[5], 0.0);
  EXPECT_NEAR(v.norm(), std::sqrt(3.0), 1e-15);
}

TEST(SymVec, ZeroMatrix) {
  EXPECT_EQ(SymMat3().vec().norm(), 0.0);
  EXPECT_EQ(SymMat2().vec().norm(), 0.0);
}

TEST(SymVec, OffDiagonalCarriesSqrt2) {
  Mat3 m = Mat3::Zero();
  m(0, 1) = m(1, 0) = 1.0;
  const SymMat3 s(m);
  const Vec6 v = s.vec();
  EXPECT_DOUBLE_EQ(v[3], kSqrt2);  // the (1,2) slot
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_NEAR(v.norm(), s.norm(), 1e-15);
  EXPECT_NEAR(v.norm(), kSqrt2, 1e-15);
}

TEST(SymVec, RoundTripAndIsometry) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const SymMat3 m = random_sym3(rng, 3.0);
    const SymMat3 n = random_sym3(rng, 3.0);
    EXPECT_EQ((SymMat3::from_vec(m.vec()) - m).norm(), 0.0);
    EXPECT_NEAR(m.vec().dot(n.vec()), m.inner(n), 1e-12);
    const SymMat2 a = random_sym2(rng, 3.0);
    EXPECT_EQ((SymMat2::from_vec(a.vec()) - a).norm(), 0.0);
  }
}

TEST(ApplyForm, AntisymmetricAnnihilated) {
  std::mt19937_64 rng(11);
  const QuadForm3 q = random_spd_form3(rng);
  Mat3 a = Mat3::Zero();
  a(0, 1) = 1;
  a(1, 0) = -1;
  EXPECT_EQ(apply_form(q, a), 0.0);
}

TEST(ApplyForm, IdentityOperatorOnIdentity) {
  EXPECT_DOUBLE_EQ(apply_form(QuadForm3::identity(), Mat3(Mat3::Identity())), 3.0);
}

TEST(ApplyForm, MatchesDenseEvaluation) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const QuadForm3 q = random_spd_form3(rng);
    const Mat3 f = random_mat3(rng, 2.0);
    const Vec6 v = SymMat3(f).vec();  // sym projection then coordinates
    const double dense = v.dot(q.matrix() * v);
    EXPECT_NEAR(apply_form(q, f), dense, 1e-12 * (1 + std::abs(dense)));
    EXPECT_NEAR(apply_form(q, f), apply_form(q, Mat3(sym(f))), 1e-12);
    EXPECT_GE(apply_form(q, f), 0.0);
  }
}

TEST(FrameOf, IdentityFrame) {
  Mat32 grad;
  grad << 1, 0, 0, 1, 0, 0;
  EXPECT_NEAR((frame_of(grad, Vec3(0, 0, 1)) - Mat3::Identity()).norm(), 0.0, 1e-15);
}

TEST(FrameOf, CylinderFrameOrthonormal) {
  const SurfaceFamily cyl = SurfaceFamily::cylinder(2.0);
  const Vec2 x(0.0, 0.3);
  const Mat3 q = frame_of(cyl.jacobian(x), cyl.normal(x), 1e-12);
  EXPECT_LE((q.transpose() * q - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FrameOf, RejectsNonOrthogonal) {
  Mat32 grad;
  grad << 1, 0.1, 0, 1, 0, 0;
  EXPECT_THROW(frame_of(grad, Vec3(0, 0, 1)), FrameNotOrthogonal);
}

TEST(MatrixOps, PolarAndDistance) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const Mat3 r = random_rotation(rng);
    EXPECT_NEAR(dist2_so3(r), 0.0, 1e-12);
    const Mat3 f = r * Eigen::DiagonalMatrix<double, 3>(2.0, 1.0, 1.0);
    EXPECT_NEAR(dist2_so3(f), 1.0, 1e-10);
    EXPECT_NEAR((polar_factor(f) - r).cwiseAbs().maxCoeff(), 0.0, 1e-10);
  }
  // Reflection branch: smallest singular value sign-flips.
  Mat3 refl = Mat3::Identity();
  refl(2, 2) = -1;
  EXPECT_NEAR(dist2_so3(refl), 4.0, 1e-12);
}
