#include <gtest/gtest.h>

#include "platelim/oracles.hpp"
#include "platelim/relax.hpp"
#include "platelim/verify.hpp"

using namespace platelim;

namespace {

QuadForm2 isotropic_plane_stress(double mu, double lambda) {
  // 2 mu |X|^2 + (2 mu lambda / (2 mu + lambda)) tr^2 X
  const double q = 2.0 * mu * lambda / (2.0 * mu + lambda);
  return QuadForm2::from_action([mu, q](const SymMat2& x) {
    return SymMat2(Mat2(2.0 * mu * x.mat() + q * x.trace() * Mat2::Identity()));
  });
}

}  // namespace

TEST(Relax, IsotropicClosedForm) {
  for (const auto& [mu, lambda] : std::vector<std::pair<double, double>>{
           {1.0, 1.0}, {2.0, 0.5}, {0.7, 3.0}}) {
    const RelaxedForm rf = relax(QuadForm3::isotropic(mu, lambda), SymMat3::identity());
    const QuadForm2 expected = isotropic_plane_stress(mu, lambda);
    EXPECT_LE((rf.q2.matrix() - expected.matrix()).cwiseAbs().maxCoeff(), 1e-9)
        << "mu=" << mu << " lambda=" << lambda;
  }
}

TEST(Relax, IsotropicMinimizerThirdComponent) {
  const double mu = 1.0, lambda = 1.0;
  const RelaxedForm rf = relax(QuadForm3::isotropic(mu, lambda), SymMat3::identity());
  const Vec3 c = rf.c_min(SymMat2::identity());
  EXPECT_NEAR(c[0], 0.0, 1e-12);
  EXPECT_NEAR(c[1], 0.0, 1e-12);
  EXPECT_NEAR(c[2], -lambda * 2.0 / (2.0 * mu + lambda), 1e-12);  // -2/3
  // Trace-free diagonal input: no normal component.
  EXPECT_NEAR(rf.c_min(SymMat2(1.0, -1.0, 0.0)).norm(), 0.0, 1e-12);
}

TEST(Relax, DistLawDecouples) {
  // Q3 = 2 |sym F|^2: no in-plane/out-of-plane coupling, c_min = 0 and
  // Q2(X) = 2 |X|^2.
  const RelaxedForm rf = relax(QuadForm3::isotropic(1.0, 0.0), SymMat3::identity());
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    const SymMat2 x = random_sym2(rng, 2.0);
    EXPECT_NEAR(rf.c_min(x).norm(), 0.0, 1e-12);
    EXPECT_NEAR(rf.q2(x), 2.0 * x.norm() * x.norm(), 1e-12);
  }
}

TEST(Relax, ZeroInputZeroOutput) {
  std::mt19937_64 rng(22);
  const RelaxedForm rf = relax(random_spd_form3(rng), SymMat3::identity());
  EXPECT_EQ(rf.c_min(SymMat2()).norm(), 0.0);
  EXPECT_EQ(rf.q2(SymMat2()), 0.0);
}

TEST(Relax, GridSearchOracleIdentityAbar) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 4; ++i) {
    const QuadForm3 q3 = random_spd_form3(rng, 0.5, 2.5);
    const RelaxedForm rf = relax(q3, SymMat3::identity());
    const SymMat2 x = random_sym2(rng, 1.0);
    const double oracle =
        oracles::grid_search_relaxed(q3, SymMat3::identity(), x, 8.0, 2e-5);
    EXPECT_NEAR(rf.q2(x), oracle, 1e-8);
  }
}

TEST(Relax, GridSearchOracleGeneralAbar) {
  std::mt19937_64 rng(24);
  Mat3 am;
  am << 1.3, 0.2, 0.1, 0.2, 0.9, -0.05, 0.1, -0.05, 1.1;
  const SymMat3 abar(am);
  for (int i = 0; i < 3; ++i) {
    const QuadForm3 q3 = random_spd_form3(rng, 0.5, 2.5);
    const RelaxedForm rf = relax(q3, abar);
    const SymMat2 x = random_sym2(rng, 1.0);
    const double oracle = oracles::grid_search_relaxed(q3, abar, x, 8.0, 2e-5);
    EXPECT_NEAR(rf.q2(x), oracle, 1e-8);
  }
}

TEST(Relax, LiftRealizesRelaxedValue) {
  std::mt19937_64 rng(25);
  Mat3 am;
  am << 1.2, 0.1, 0.0, 0.1, 1.0, 0.2, 0.0, 0.2, 0.8;
  const SymMat3 abar(am);
  const Mat3 ainv = abar.mat().inverse();
  for (int i = 0; i < 20; ++i) {
    const QuadForm3 q3 = random_spd_form3(rng);
    const RelaxedForm rf = relax(q3, abar);
    const SymMat2 x = random_sym2(rng, 2.0);
    const SymMat3 lift = relaxed_lift(rf, x);
    EXPECT_NEAR(apply_form(q3, Mat3(ainv * lift.mat() * ainv)), rf.q2(x),
                1e-11 * (1.0 + rf.q2(x)));
  }
  EXPECT_EQ(relaxed_lift(relax(QuadForm3::isotropic(1, 1), SymMat3::identity()), SymMat2())
                .norm(),
            0.0);
}

TEST(Relax, RelaxationNeverIncreasesEnergy) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 100; ++i) {
    const QuadForm3 q3 = random_spd_form3(rng);
    const RelaxedForm rf = relax(q3, SymMat3::identity());
    const SymMat2 x = random_sym2(rng, 2.0);
    EXPECT_LE(rf.q2(x), q3(SymMat3::embed(x)) + 1e-12);
  }
}

TEST(Relax, MinimizerIsLinear) {
  std::mt19937_64 rng(27);
  const RelaxedForm rf = relax(random_spd_form3(rng), SymMat3::identity());
  for (int i = 0; i < 50; ++i) {
    const SymMat2 x = random_sym2(rng, 2.0), y = random_sym2(rng, 2.0);
    const double a = 0.8, b = -2.1;
    EXPECT_LE((rf.c_min(a * x + b * y) - a * rf.c_min(x) - b * rf.c_min(y))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(Relax, MinimizerBoundedBySpectralConstants) {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 100; ++i) {
    const QuadForm3 q3 = random_spd_form3(rng, 0.3, 4.0);
    const RelaxedForm rf = relax(q3, SymMat3::identity());
    const SymMat2 x = random_sym2(rng, 2.0);
    const double ratio = q3.max_eigenvalue() / q3.min_eigenvalue();
    EXPECT_LE(rf.c_min(x).norm(), (ratio + 1.0) * x.norm() + 1e-12);
  }
}

TEST(Relax, RejectsNonSpdAbar) {
  Mat3 bad = Mat3::Identity();
  bad(2, 2) = -1.0;
  EXPECT_THROW(relax(QuadForm3::isotropic(1, 1), SymMat3(bad)), SingularAbar);
}

TEST(Relax, SuitePasses) {
  for (const CheckResult& c : verify::relax_suite(4242))
    EXPECT_TRUE(c.pass()) << c.name << " violation " << c.violation;
}
