#include <gtest/gtest.h>

#include "platelim/elastic.hpp"
#include "platelim/verify.hpp"

using namespace platelim;

namespace {
const Vec2 kX(0.3, 0.6);
}

TEST(DistLaw, ZeroOnRotations) {
  const ElasticLaw law = builtin_dist_law();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i)
    EXPECT_NEAR(law.w(kX, 0.0, random_rotation(rng)), 0.0, 1e-13);
}

TEST(DistLaw, UniaxialStretch) {
  const ElasticLaw law = builtin_dist_law();
  const double eps = 0.1;
  const Mat3 f = Eigen::DiagonalMatrix<double, 3>(1.0 + eps, 1.0, 1.0);
  EXPECT_NEAR(law.w(kX, 0.0, f), eps * eps, 1e-14);
}

TEST(DistLaw, FrameIndifferentStretch) {
  const ElasticLaw law = builtin_dist_law();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Mat3 f = random_rotation(rng) * Eigen::DiagonalMatrix<double, 3>(2.0, 1.0, 1.0);
    EXPECT_NEAR(law.w(kX, 0.0, f), 1.0, 1e-10);
  }
}

TEST(DistLaw, FlagsNonPositiveDeterminant) {
  const ElasticLaw law = builtin_dist_law();
  Mat3 refl = Mat3::Identity();
  refl(0, 0) = -1;
  EXPECT_THROW(law.w(kX, 0.0, refl), SingularDeformation);
}

TEST(IsotropicLaw, HessianValuesAtIdentityDirection) {
  // Q3(Id) = 2 mu |Id|^2 + lambda tr^2 = 6 mu + 9 lambda.
  EXPECT_NEAR(QuadForm3::isotropic(1.0, 0.0)(SymMat3::identity()), 6.0, 1e-14);
  EXPECT_NEAR(QuadForm3::isotropic(1.0, 2.0)(SymMat3::identity()), 24.0, 1e-14);
}

TEST(IsotropicLaw, AntisymmetricDirectionVanishes) {
  Mat3 a = Mat3::Zero();
  a(0, 1) = 1;
  a(1, 0) = -1;
  EXPECT_EQ(QuadForm3::isotropic(1.0, 1.0)(a), 0.0);
  // Second differences of W itself along the antisymmetric ray.
  const ElasticLaw law = builtin_isotropic_quadratic(1.0, 1.0);
  const double s = 1e-4;
  const double quot = (law.w(kX, 0, Mat3(Mat3::Identity() + s * a)) -
                       2 * law.w(kX, 0, Mat3(Mat3::Identity())) +
                       law.w(kX, 0, Mat3(Mat3::Identity() - s * a))) /
                      (s * s);
  EXPECT_NEAR(quot, 0.0, 1e-8);
}

TEST(IsotropicLaw, RejectsBadModuli) {
  EXPECT_THROW(builtin_isotropic_quadratic(-1.0, 1.0), BadModuli);
  EXPECT_THROW(builtin_isotropic_quadratic(1.0, -1.0), BadModuli);
}

TEST(Hessian, MatchesClosedFormIsotropic) {
  const ElasticLaw law = builtin_isotropic_quadratic(1.0, 1.0);
  const QuadForm3 fd = hessian_at_identity(law, kX, 0.0);
  const QuadForm3 exact = QuadForm3::isotropic(1.0, 1.0);
  EXPECT_LE((fd.matrix() - exact.matrix()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Hessian, MatchesClosedFormDist) {
  const QuadForm3 fd = hessian_at_identity(builtin_dist_law(), kX, 0.0);
  const QuadForm3 exact = QuadForm3::isotropic(1.0, 0.0);  // 2 |sym F|^2
  EXPECT_LE((fd.matrix() - exact.matrix()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Hessian, StepGuards) {
  const ElasticLaw law = builtin_dist_law();
  EXPECT_THROW(hessian_at_identity(law, kX, 0.0, 1e-9), StepTooSmall);
  EXPECT_THROW(hessian_at_identity(law, kX, 0.0, 0.0), StepTooSmall);
}

TEST(Hessian, RejectsIndefiniteLaw) {
  EXPECT_THROW(hessian_at_identity(unstable_quadratic(1.0, -1.0), kX, 0.0),
               HessianNotPSD);
}

TEST(TaylorRatio, SmoothLawApproachesOne) {
  std::mt19937_64 rng(9);
  const Mat3 f = random_sym3(rng, 1.0).mat();
  const TaylorRatioReport rep =
      taylor_ratio_check(builtin_dist_law(), kX, 0.0, f, {1e-2, 1e-3, 1e-4});
  ASSERT_TRUE(rep.applicable);
  EXPECT_LE(rep.final_deviation, 1e-2);
  // Deviations shrink with h.
  EXPECT_LE(std::abs(rep.ratio[2] - 1.0), std::abs(rep.ratio[0] - 1.0) + 1e-12);
}

TEST(TaylorRatio, QuadraticLawExactOnSymmetricRays) {
  std::mt19937_64 rng(10);
  const Mat3 f = random_sym3(rng, 0.5).mat();
  const TaylorRatioReport rep = taylor_ratio_check(builtin_isotropic_quadratic(1.0, 1.0),
                                                   kX, 0.0, f, {1e-1, 1e-2, 1e-3});
  ASSERT_TRUE(rep.applicable);
  for (double r : rep.ratio) EXPECT_NEAR(r, 1.0, 1e-10);
}

TEST(TaylorRatio, AntisymmetricNotApplicable) {
  Mat3 a = Mat3::Zero();
  a(0, 1) = 1;
  a(1, 0) = -1;
  const TaylorRatioReport rep =
      taylor_ratio_check(builtin_dist_law(), kX, 0.0, a, {1e-2, 1e-3});
  EXPECT_FALSE(rep.applicable);
}

TEST(Hypotheses, DistSandwichIsEquality) {
  const ElasticLaw law = builtin_dist_law();
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    Mat3 f = random_rotation(rng) + random_mat3(rng, 0.28);
    if (f.determinant() <= 0) continue;
    EXPECT_NEAR(law.w(kX, 0.0, f), dist2_so3(f), 1e-10);
  }
}

TEST(Hypotheses, IsotropicSandwich) {
  const double mu = 1.0, lambda = 1.3;
  const ElasticLaw law = builtin_isotropic_quadratic(mu, lambda);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    Mat3 f = random_rotation(rng) + random_mat3(rng, 0.28);
    if (f.determinant() <= 0) continue;
    const double d2 = dist2_so3(f);
    const double w = law.w(kX, 0.0, f);
    EXPECT_GE(w, mu * d2 - 1e-12);
    EXPECT_LE(w, (mu + 1.5 * lambda) * d2 + 1e-12);
  }
}

TEST(Hypotheses, SuitePasses) {
  for (const CheckResult& c : verify::elastic_suite(2024))
    EXPECT_TRUE(c.pass()) << c.name << " violation " << c.violation << " tol " << c.tol;
}
