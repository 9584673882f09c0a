#include <gtest/gtest.h>

#include "platelim/effective.hpp"
#include "platelim/energy.hpp"
#include "platelim/oracles.hpp"
#include "platelim/verify.hpp"

using namespace platelim;

TEST(Quadrature, GaussExactness) {
  const ThicknessQuadrature q = ThicknessQuadrature::gauss(16);
  EXPECT_NEAR(q.moment(0), 1.0, 1e-14);
  EXPECT_NEAR(q.moment(1), 0.0, 1e-14);
  // int t^k over (-1/2, 1/2) = (1/2)^k / (k+1) for even k.
  for (int k = 2; k <= 30; k += 2)
    EXPECT_NEAR(q.moment(k), std::pow(0.5, k) / (k + 1), 1e-15) << "k=" << k;
}

TEST(Quadrature, LayeredIntegratesLaminates) {
  const ThicknessQuadrature q = ThicknessQuadrature::gauss_layered({-0.5, 0.0, 0.5}, 4);
  EXPECT_NEAR(q.moment(0), 1.0, 1e-14);
  // Piecewise: int sign(t) t dt = 1/4.
  double m = 0;
  for (int i = 0; i < q.size(); ++i)
    m += q.weights[i] * (q.nodes[i] >= 0 ? q.nodes[i] : -q.nodes[i]);
  EXPECT_NEAR(m, 0.25, 1e-14);
}

TEST(Moments, ConstantFormHasZeroFirstProjection) {
  std::mt19937_64 rng(31);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  std::vector<QuadForm2> l2(quad.size(), random_spd_form2(rng));
  const MomentOperators mo = moments(l2, quad);
  EXPECT_LE(mo.phi1.cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Moments, LinearModulationGivesTwelfth) {
  std::mt19937_64 rng(32);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const QuadForm2 l0 = random_spd_form2(rng);
  std::vector<QuadForm2> l2(quad.size());
  for (int i = 0; i < quad.size(); ++i)
    l2[i] = QuadForm2(Mat3((1.0 + quad.nodes[i]) * l0.matrix()));
  const MomentOperators mo = moments(l2, quad);
  EXPECT_LE((mo.phi1 - Mat3::Identity() / 12.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Moments, PhiFixesConstantFields) {
  std::mt19937_64 rng(33);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  std::vector<QuadForm2> l2(quad.size());
  for (auto& l : l2) l = random_spd_form2(rng);
  const MomentOperators mo = moments(l2, quad);
  const SymMat2 x = random_sym2(rng, 2.0);
  std::vector<SymMat2> field(quad.size(), x);
  EXPECT_LE((apply_phi(mo, l2, field, quad) - x).norm(), 1e-12);
}

TEST(Effective, LinearPrestrainRecoversSlope) {
  std::mt19937_64 rng(34);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(16);
  const QuadForm2 l0 = random_spd_form2(rng);
  std::vector<QuadForm2> l2(quad.size(), l0);
  const SymMat2 b1 = random_sym2(rng, 1.0);
  std::vector<SymMat2> ab(quad.size());
  for (int i = 0; i < quad.size(); ++i) ab[i] = b1 * quad.nodes[i];
  const PlatePoint p = effective_point(ab, l2, quad);
  EXPECT_LE((p.n_star - b1).norm(), 1e-10);
  EXPECT_LE(std::abs(p.residue), 1e-12);
  // T2* = L2 / 12 for constant-in-t forms.
  EXPECT_LE((p.t2_star.matrix() - l0.matrix() / 12.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Effective, ConstantPrestrainIsInert) {
  std::mt19937_64 rng(35);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(16);
  std::vector<QuadForm2> l2(quad.size());
  for (auto& l : l2) l = random_spd_form2(rng);
  std::vector<SymMat2> ab(quad.size(), random_sym2(rng, 2.0));
  const PlatePoint p = effective_point(ab, l2, quad);
  for (const auto& n1 : p.n1) EXPECT_LE(n1.norm(), 1e-12);
  EXPECT_LE(p.n_star.norm(), 1e-12);
  EXPECT_LE(std::abs(p.residue), 1e-13);
}

TEST(Effective, QuadraticPrestrainResidue) {
  std::mt19937_64 rng(36);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(16);
  const QuadForm2 l0 = random_spd_form2(rng);
  std::vector<QuadForm2> l2(quad.size(), l0);
  const SymMat2 b2 = random_sym2(rng, 1.0);
  std::vector<SymMat2> ab(quad.size());
  for (int i = 0; i < quad.size(); ++i) ab[i] = b2 * (quad.nodes[i] * quad.nodes[i]);
  const PlatePoint p = effective_point(ab, l2, quad);
  EXPECT_LE(p.n_star.norm(), 1e-12);
  const double expected = l0(b2) * (1.0 / 80.0 - 1.0 / 144.0);
  EXPECT_NEAR(p.residue, expected, 1e-12 * (1 + expected));
  // Cross-check against the Gram projection onto the affine span.
  const auto proj = oracles::gram_affine_projection(ab, l2, quad);
  EXPECT_NEAR(p.residue, proj.residual_norm_sq, 1e-12);
}

TEST(Effective, LaminatePreferredCurvature) {
  // Two-layer laminate B = -B0 below the midplane, +B0 above, constant form:
  // n* = 3 B0 and R = (1/4) <L2 B0, B0>.
  std::mt19937_64 rng(37);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss_layered({-0.5, 0.0, 0.5}, 8);
  const QuadForm2 l0 = random_spd_form2(rng);
  std::vector<QuadForm2> l2(quad.size(), l0);
  const SymMat2 b0 = random_sym2(rng, 1.0);
  std::vector<SymMat2> ab(quad.size());
  for (int i = 0; i < quad.size(); ++i) ab[i] = b0 * (quad.nodes[i] >= 0 ? 1.0 : -1.0);
  const PlatePoint p = effective_point(ab, l2, quad);
  EXPECT_LE((p.n_star - 3.0 * b0).norm(), 1e-10);
  EXPECT_NEAR(p.residue, 0.25 * l0(b0), 1e-10 * (1 + p.residue));
  // And the Gram oracle agrees.
  const auto proj = oracles::gram_affine_projection(ab, l2, quad);
  EXPECT_NEAR(p.residue, proj.residual_norm_sq, 1e-10);
}

TEST(Effective, ResidueCertificateRandomSamples) {
  std::mt19937_64 rng(38);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<QuadForm2> l2(quad.size());
    std::vector<SymMat2> ab(quad.size());
    for (int i = 0; i < quad.size(); ++i) {
      l2[i] = random_spd_form2(rng);
      ab[i] = random_sym2(rng, 1.5);
    }
    const PlatePoint p = effective_point(ab, l2, quad);
    EXPECT_LE(residue_certificate(p, ab, quad), 1e-10);
    EXPECT_GE(p.residue, -1e-12);
    const auto proj = oracles::gram_affine_projection(ab, l2, quad);
    EXPECT_NEAR(p.residue, proj.residual_norm_sq, 1e-10);
    // t n* - phi(t n*) is the projection onto the complement of constants.
    for (int i = 0; i < quad.size(); ++i) {
      const Mat3 v2 = quad.nodes[i] * Mat3::Identity() - p.mo.phi1;
      const SymMat2 vn = SymMat2::from_vec(v2 * p.n_star.vec());
      EXPECT_LE((vn - proj.ortho_part[i]).norm(), 1e-10);
    }
  }
}

TEST(Effective, T2StarPositiveOverRandomFields) {
  std::mt19937_64 rng(39);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<QuadForm2> l2(quad.size());
    std::vector<SymMat2> ab(quad.size());
    for (int i = 0; i < quad.size(); ++i) {
      l2[i] = random_spd_form2(rng);
      ab[i] = random_sym2(rng, 1.0);
    }
    const PlatePoint p = effective_point(ab, l2, quad);
    EXPECT_GT(p.t2_star.min_eigenvalue(), 0.0);
    EXPECT_GE(p.residue, -1e-12);
  }
}

TEST(Effective, QuadratureConvergenceOnPolynomials) {
  std::mt19937_64 rng(40);
  // Degree-3 form modulation and degree-6 prestrain; doubling nodes is inert.
  const QuadForm2 l0 = random_spd_form2(rng);
  const SymMat2 b6 = random_sym2(rng, 1.0);
  const auto at = [&](int n) {
    const ThicknessQuadrature q = ThicknessQuadrature::gauss(n);
    std::vector<QuadForm2> l2(q.size());
    std::vector<SymMat2> ab(q.size());
    for (int i = 0; i < q.size(); ++i) {
      const double t = q.nodes[i];
      l2[i] = QuadForm2(Mat3((1.0 + 0.5 * t + 0.25 * t * t * t) * l0.matrix()));
      ab[i] = b6 * std::pow(t, 6);
    }
    return effective_point(ab, l2, q);
  };
  const PlatePoint pa = at(16), pb = at(32);
  EXPECT_LE((pa.t2_star.matrix() - pb.t2_star.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((pa.n_star - pb.n_star).norm(), 1e-10);
  EXPECT_NEAR(pa.residue, pb.residue, 1e-10);
}

TEST(Effective, OptimalInPlaneMatchesDirectMinimizer) {
  // s* = phi((Abar B)_2x2) - phi1(H) equals the s returned by the dense solve.
  std::mt19937_64 rng(41);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const QuadForm3 q3 = random_spd_form3(rng);
  const RelaxedForm rf = relax(q3, SymMat3::identity());
  std::vector<QuadForm3> q3s(quad.size(), q3);
  std::vector<QuadForm2> l2(quad.size(), rf.q2);
  std::vector<SymMat3> b(quad.size());
  std::vector<SymMat2> ab(quad.size());
  for (int i = 0; i < quad.size(); ++i) {
    const double t = quad.nodes[i];
    b[i] = random_sym3(rng, 0.3) * t + random_sym3(rng, 0.2);
    ab[i] = b[i].block2x2();
  }
  // Rebuild with a fixed profile so both routes see the same samples.
  const SymMat2 h = random_sym2(rng, 1.0);
  const PlatePoint p = effective_point(ab, l2, quad);
  const DirectPointResult direct =
      direct_relaxed_energy_point(SymMat3::identity(), b, q3s, h, quad);
  EXPECT_LE((p.optimal_in_plane(h) - direct.s_opt).norm(), 1e-9);
  const double closed = p.t2_star(h - p.n_star) + p.residue;
  EXPECT_NEAR(direct.value, closed, 1e-10 * (1 + std::abs(closed)));
}

TEST(Effective, SuitePasses) {
  for (const CheckResult& c : verify::effective_suite(777))
    EXPECT_TRUE(c.pass()) << c.name << " violation " << c.violation;
}
