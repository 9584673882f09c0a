#include <gtest/gtest.h>

#include "platelim/energy.hpp"
#include "platelim/verify.hpp"

using namespace platelim;

TEST(BuildSurface, PlaneIsFlat) {
  const Midsurface s = build_surface(SurfaceFamily::plane(), Grid2::unit(9, 9));
  for (int n = 0; n < s.grid.count(); ++n) {
    EXPECT_EQ(s.second_form[n].norm(), 0.0);
    EXPECT_LE((s.nu[n] - Vec3(0, 0, 1)).norm(), 1e-15);
  }
}

TEST(BuildSurface, CylinderCurvature) {
  const double rho = 2.0;
  const Midsurface s = build_surface(SurfaceFamily::cylinder(rho), Grid2::unit(64, 64));
  double worst1 = 0, worst2 = 0;
  for (const SymMat2& ii : s.second_form) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(ii.mat());
    worst1 = std::max(worst1, std::abs(es.eigenvalues()[1] - 1.0 / rho));
    worst2 = std::max(worst2, std::abs(es.eigenvalues()[0]));
  }
  EXPECT_LE(worst1, 1e-3);
  EXPECT_LE(worst2, 1e-3);
}

TEST(BuildSurface, SpherePatchIsNotFlatIsometry) {
  const Midsurface s = build_surface(SurfaceFamily::sphere_patch(1.0), Grid2::unit(17, 17));
  const IsometryReport rep =
      isometry_residual(s, [](const Vec2&) { return SymMat2::identity(); });
  EXPECT_GT(rep.max, 1e-2);
}

TEST(BuildSurface, RejectsDegenerateChart) {
  SurfaceFamily collapsed;
  collapsed.name = "point";
  collapsed.value = [](const Vec2&) { return Vec3(1, 2, 3); };
  EXPECT_THROW(build_surface(collapsed, Grid2::unit(5, 5)), DegenerateSurface);
  EXPECT_THROW(build_surface(SurfaceFamily::plane(), Grid2::unit(2, 5)), Error);
}

TEST(Cosserat, IdentityMetricGivesNormal) {
  Mat32 grad;
  grad << 1, 0, 0, 1, 0, 0;
  EXPECT_LE((cosserat(grad, SymMat3::identity()) - Vec3(0, 0, 1)).norm(), 1e-15);
}

TEST(Cosserat, ThickeningScalesNormal) {
  Mat32 grad;
  grad << 1, 0, 0, 1, 0, 0;
  Mat3 g = Mat3::Identity();
  g(2, 2) = 4.0;  // det G = 4 det G_2x2
  EXPECT_LE((cosserat(grad, SymMat3(g)) - Vec3(0, 0, 2)).norm(), 1e-15);
}

TEST(Cosserat, ShearRealizesMetric) {
  Mat32 grad;
  grad << 1, 0, 0, 1, 0, 0;
  Mat3 g;
  g << 1, 0, 0.3, 0, 1, 0, 0.3, 0, 1.2;
  const Vec3 b = cosserat(grad, SymMat3(g));
  Mat3 f;
  f.leftCols<2>() = grad;
  f.col(2) = b;
  EXPECT_LE((f.transpose() * f - g).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Cosserat, CylinderFrameRealizesIdentity) {
  const SurfaceFamily cyl = SurfaceFamily::cylinder(2.0);
  const Vec2 x(0.4, 0.7);
  const Vec3 b = cosserat(cyl.jacobian(x), SymMat3::identity(), 1e-10);
  EXPECT_LE((b - cyl.normal(x)).norm(), 1e-8);
  Mat3 f;
  f.leftCols<2>() = cyl.jacobian(x);
  f.col(2) = b;
  EXPECT_LE((f.transpose() * f - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Cosserat, RejectsMetricMismatch) {
  Mat32 grad;
  grad << 2, 0, 0, 1, 0, 0;  // stretched
  EXPECT_THROW(cosserat(grad, SymMat3::identity()), MetricMismatch);
}

TEST(IsometryResidual, PlaneCylinderStretched) {
  const Grid2 grid = Grid2::unit(33, 33);
  const auto id2 = [](const Vec2&) { return SymMat2::identity(); };
  EXPECT_EQ(isometry_residual(build_surface(SurfaceFamily::plane(), grid), id2).max, 0.0);
  EXPECT_LE(isometry_residual(build_surface(SurfaceFamily::cylinder(2.0), grid), id2).max,
            5e-3);
  SurfaceFamily stretched;
  stretched.name = "stretched";
  stretched.value = [](const Vec2& x) { return Vec3(2 * x[0], x[1], 0); };
  const IsometryReport rep = isometry_residual(build_surface(stretched, grid), id2);
  // grad^T grad - Id = diag(3, 0), Frobenius norm 3, exact for a linear chart.
  EXPECT_NEAR(rep.max, 3.0, 1e-12);
}

TEST(GammaEnergy, PlaneWithoutPrestrainIsZero) {
  const Grid2 grid = Grid2::unit(17, 17);
  const PrestrainField pre =
      PrestrainField::uniform(SymMat3::identity(), TProfile::constant(SymMat3()));
  const Q3Field q3f = q3_isotropic(1.0, 1.0);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const Midsurface s = build_surface(SurfaceFamily::plane(), grid);
  const PlateModel model = effective_model(grid, pre, q3f, quad);
  EXPECT_NEAR(gamma_energy(s, model, pre).total, 0.0, 1e-15);
  EXPECT_NEAR(gamma_energy_direct(s, pre, q3f, quad).total, 0.0, 1e-15);
}

TEST(GammaEnergy, FlatSheetLinearPrestrainClosedForm) {
  const Grid2 grid = Grid2::unit(17, 17);
  const double mu = 1.0, lambda = 1.0;
  Mat3 b1m;
  b1m << 0.4, 0.1, 0, 0.1, -0.3, 0, 0, 0, 0.2;
  const SymMat3 b1(b1m);
  const PrestrainField pre =
      PrestrainField::uniform(SymMat3::identity(), TProfile::linear(b1));
  const Q3Field q3f = q3_isotropic(mu, lambda);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const Midsurface s = build_surface(SurfaceFamily::plane(), grid);
  const PlateModel model = effective_model(grid, pre, q3f, quad);
  const double total = gamma_energy(s, model, pre).total;
  // n* = (B1)_2x2, H = 0, R = 0: total = (1/2) <T2* B1, B1> with T2* = L2/12.
  const RelaxedForm rf = relax(QuadForm3::isotropic(mu, lambda), SymMat3::identity());
  const double expected = 0.5 / 12.0 * rf.q2(b1.block2x2());
  EXPECT_NEAR(total, expected, 1e-10 * (1 + expected));
  const double direct = gamma_energy_direct(s, pre, q3f, quad).total;
  EXPECT_NEAR(total, direct, 1e-8 * (1 + std::abs(direct)));
}

TEST(GammaEnergy, CurvatureMatchingKillsQuadraticTerm) {
  // B = t * iota(II): the preferred curvature equals the cylinder's curvature,
  // so only discretization error remains.
  const double rho = 2.0;
  const Grid2 grid = Grid2::unit(48, 48);
  const SymMat2 ii(1.0 / rho, 0.0, 0.0);
  const PrestrainField pre = PrestrainField::uniform(
      SymMat3::identity(), TProfile::linear(SymMat3::embed(ii)));
  const Q3Field q3f = q3_isotropic(1.0, 1.0);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const Midsurface s = build_surface(SurfaceFamily::cylinder(rho), grid);
  const PlateModel model = effective_model(grid, pre, q3f, quad);
  EXPECT_LE(gamma_energy(s, model, pre, 1e-2).total, 1e-6);
}

TEST(GammaEnergy, IsometryGateRaises) {
  const Grid2 grid = Grid2::unit(9, 9);
  const PrestrainField pre =
      PrestrainField::uniform(SymMat3::identity(), TProfile::constant(SymMat3()));
  const Q3Field q3f = q3_isotropic(1.0, 1.0);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(4);
  const Midsurface s = build_surface(SurfaceFamily::sphere_patch(1.0), grid);
  const PlateModel model = effective_model(grid, pre, q3f, quad);
  EXPECT_THROW(gamma_energy(s, model, pre, 1e-6), InfiniteEnergy);
  EXPECT_THROW(gamma_energy_direct(s, pre, q3f, quad, 1e-6), InfiniteEnergy);
}

TEST(GammaEnergy, ClosedFormMatchesDirectOnRandomInstances) {
  std::mt19937_64 rng(55);
  const Grid2 grid = Grid2::unit(10, 10);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  for (int inst = 0; inst < 5; ++inst) {
    const Midsurface s = build_surface(
        inst % 2 ? SurfaceFamily::plane() : SurfaceFamily::cylinder(2.0), grid);
    std::vector<SymMat3> coeffs;
    for (int k = 0; k < 4; ++k) coeffs.push_back(random_sym3(rng, 0.7));
    const PrestrainField pre =
        PrestrainField::uniform(SymMat3::identity(), TProfile::poly(coeffs));
    const Q3Field q3f = q3_constant(random_spd_form3(rng));
    const PlateModel model = effective_model(grid, pre, q3f, quad);
    const double closed = gamma_energy(s, model, pre, 1e-2).total;
    const double direct = gamma_energy_direct(s, pre, q3f, quad, 1e-2).total;
    EXPECT_NEAR(closed, direct, 1e-8 * std::max(1.0, std::abs(direct)));
  }
}

TEST(GammaEnergy, RigidMotionInvariance) {
  std::mt19937_64 rng(56);
  const Grid2 grid = Grid2::unit(24, 24);
  const PrestrainField pre = PrestrainField::uniform(
      SymMat3::identity(), TProfile::linear(random_sym3(rng, 0.5)));
  const Q3Field q3f = q3_isotropic(1.2, 0.8);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const PlateModel model = effective_model(grid, pre, q3f, quad);
  const SurfaceFamily cyl = SurfaceFamily::cylinder(2.0);
  const double e0 = gamma_energy(build_surface(cyl, grid), model, pre, 1e-2).total;
  const Mat3 r = random_rotation(rng);
  const double e1 =
      gamma_energy(build_surface(cyl.moved(r, Vec3(1, -2, 0.5)), grid), model, pre, 1e-2)
          .total;
  EXPECT_NEAR(e0, e1, 1e-10 * (1 + std::abs(e0)));
}

TEST(GammaEnergy, RefinementIsSecondOrder) {
  std::mt19937_64 rng(57);
  const PrestrainField pre = PrestrainField::uniform(
      SymMat3::identity(), TProfile::linear(random_sym3(rng, 0.5)));
  const Q3Field q3f = q3_isotropic(1.0, 1.0);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const auto at = [&](int n) {
    const Grid2 grid = Grid2::unit(n, n);
    const Midsurface s = build_surface(SurfaceFamily::cylinder(2.0), grid);
    return gamma_energy(s, effective_model(grid, pre, q3f, quad), pre, 1e-1).total;
  };
  const double e16 = at(17), e32 = at(33), e64 = at(65);
  const double r = std::abs(e32 - e16) / std::abs(e64 - e32);
  EXPECT_GE(r, 2.5);
  EXPECT_LE(r, 6.5);
}

TEST(Midsurface, SuitePasses) {
  for (const CheckResult& c : verify::midsurface_suite(31337))
    EXPECT_TRUE(c.pass()) << c.name << " violation " << c.violation;
}
