#pragma once

// Runnable invariant suites. Each check reports its measured violation and
// the tolerance it is held to; the CLI prints one line per check and the
// acceptance tests assert on the same data.

#include <cmath>

#include "platelim/ansatz.hpp"
#include "platelim/oracles.hpp"
#include "platelim/regimes.hpp"

namespace platelim {

struct CheckResult {
  std::string name;
  double violation = 0;
  double tol = 0;
  bool pass() const { return violation <= tol; }
};

namespace verify {

inline void add(std::vector<CheckResult>& out, const std::string& name, double violation,
                double tol) {
  out.push_back({name, violation, tol});
}

inline std::vector<CheckResult> symalg_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  double rt = 0, iso = 0, symdrop = 0, annihilate = 0;
  for (int i = 0; i < 100; ++i) {
    const SymMat3 m = random_sym3(rng, 2.0);
    const SymMat3 n = random_sym3(rng, 2.0);
    rt = std::max(rt, (SymMat3::from_vec(m.vec()) - m).norm());
    iso = std::max(iso, std::abs(m.vec().dot(n.vec()) - m.inner(n)));
    const QuadForm3 q = random_spd_form3(rng);
    const Mat3 f = random_mat3(rng, 2.0);
    symdrop = std::max(symdrop, std::abs(q(f) - q(Mat3(sym(f)))));
    const Mat3 anti = 0.5 * (f - f.transpose());
    annihilate = std::max(annihilate, std::abs(q(anti)));
  }
  add(out, "symalg.vec_roundtrip_exact", rt, 1e-15);
  add(out, "symalg.inner_product_isometry", iso, 1e-12);
  add(out, "symalg.form_sees_sym_part_only", symdrop, 1e-12);
  add(out, "symalg.form_annihilates_antisymmetric", annihilate, 1e-12);
  return out;
}

inline std::vector<CheckResult> elastic_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const Vec2 x0(0.25, 0.5);
  const std::vector<ElasticLaw> laws = {builtin_dist_law(),
                                        builtin_isotropic_quadratic(1.0, 1.3)};
  for (const ElasticLaw& law : laws) {
    double frame = 0, so3 = 0;
    for (int i = 0; i < 100; ++i) {
      const Mat3 r = random_rotation(rng);
      Mat3 f = Mat3::Identity() + random_mat3(rng, 0.2);
      if (f.determinant() <= 0) f = Mat3::Identity();
      const double w = law.w(x0, 0.0, f);
      frame = std::max(frame, std::abs(law.w(x0, 0.0, Mat3(r * f)) - w) / (1.0 + w));
      so3 = std::max(so3, law.w(x0, 0.0, r));
    }
    add(out, "elastic." + law.family + ".frame_indifference", frame, 1e-10);
    add(out, "elastic." + law.family + ".zero_on_rotations", so3, 1e-12);

    const QuadForm3 fd = hessian_at_identity(law, x0, 0.0);
    const QuadForm3 exact = law.exact_hessian(x0, 0.0);
    add(out, "elastic." + law.family + ".hessian_matches_closed_form",
        (fd.matrix() - exact.matrix()).cwiseAbs().maxCoeff(), 1e-6);
    add(out, "elastic." + law.family + ".hessian_self_adjoint", fd.self_adjoint_defect(),
        1e-10);
    add(out, "elastic." + law.family + ".hessian_psd", std::max(0.0, -fd.min_eigenvalue()),
        1e-8);

    // Taylor ratio -> 1 on a symmetric direction.
    const Mat3 fsym = random_sym3(rng, 1.0).mat();
    const TaylorRatioReport tr =
        taylor_ratio_check(law, x0, 0.0, fsym, {1e-2, 1e-3, 1e-4});
    add(out, "elastic." + law.family + ".taylor_ratio", tr.final_deviation, 1e-2);
  }
  // Sandwich with the dist law's exact constants c = C = 1.
  double sandwich = 0;
  const ElasticLaw dist = builtin_dist_law();
  for (int i = 0; i < 100; ++i) {
    Mat3 f = random_rotation(rng) + random_mat3(rng, 0.28);
    if (f.determinant() <= 0) continue;
    sandwich = std::max(sandwich, std::abs(dist.w(x0, 0.0, f) - dist2_so3(f)));
  }
  add(out, "elastic.dist.sandwich_equality", sandwich, 1e-10);
  return out;
}

inline std::vector<CheckResult> relax_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  double ineq = 0, lin = 0, linf = 0, lift = 0;
  for (int i = 0; i < 100; ++i) {
    const QuadForm3 q3 = random_spd_form3(rng);
    const SymMat3 abar = (i % 3 == 0)
                             ? SymMat3::identity()
                             : SymMat3(Mat3(Mat3::Identity() + 0.3 * random_sym3(rng).mat()));
    if (Eigen::SelfAdjointEigenSolver<Mat3>(abar.mat()).eigenvalues().minCoeff() <= 0.1)
      continue;
    const RelaxedForm rf = relax(q3, abar);
    const Mat3 ainv = abar.mat().inverse();
    const SymMat2 x = random_sym2(rng, 2.0);
    const SymMat2 y = random_sym2(rng, 2.0);
    const double direct = q3(Mat3(ainv * SymMat3::embed(x).mat() * ainv));
    ineq = std::max(ineq, rf.q2(x) - direct - 1e-12);
    const double a = 0.7, b = -1.3;
    lin = std::max(lin, (rf.c_min(a * x + b * y) - a * rf.c_min(x) - b * rf.c_min(y))
                            .cwiseAbs()
                            .maxCoeff());
    const double cmin = q3.min_eigenvalue(), cmax = q3.max_eigenvalue();
    linf = std::max(linf, rf.c_min(x).norm() - (cmax / cmin + 1.0) * x.norm());
    lift = std::max(lift,
                    std::abs(q3(Mat3(ainv * relaxed_lift(rf, x).mat() * ainv)) - rf.q2(x)) /
                        (1.0 + std::abs(rf.q2(x))));
  }
  add(out, "relax.never_increases_energy", std::max(0.0, ineq), 0.0);
  add(out, "relax.c_min_linear", lin, 1e-12);
  add(out, "relax.c_min_linf_bound", std::max(0.0, linf), 0.0);
  add(out, "relax.lift_realizes_q2", lift, 1e-12);

  // Grid-search oracle on a few instances (course-to-fine to 1e-4).
  double oracle = 0;
  for (int i = 0; i < 3; ++i) {
    const QuadForm3 q3 = random_spd_form3(rng, 0.5, 2.5);
    const RelaxedForm rf = relax(q3, SymMat3::identity());
    const SymMat2 x = random_sym2(rng, 1.0);
    const double gs = oracles::grid_search_relaxed(q3, SymMat3::identity(), x);
    oracle = std::max(oracle, std::abs(gs - rf.q2(x)));
  }
  add(out, "relax.grid_search_oracle", oracle, 1e-6);
  return out;
}

inline std::vector<CheckResult> effective_suite(std::uint64_t seed, int n_nodes = 16,
                                                int degree6 = 0) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(n_nodes);
  add(out, "effective.quadrature_weights_sum", std::abs(quad.moment(0) - 1.0), 1e-14);
  add(out, "effective.quadrature_odd_moment", std::abs(quad.moment(1)), 1e-14);

  double t2pos = 1e300, rneg = 0, cert = 0, gram = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<QuadForm2> l2(quad.size());
    std::vector<SymMat2> ab(quad.size());
    for (int k = 0; k < quad.size(); ++k) {
      l2[k] = random_spd_form2(rng);
      ab[k] = random_sym2(rng, 1.5);
    }
    const PlatePoint p = effective_point(ab, l2, quad);
    t2pos = std::min(t2pos, p.t2_star.min_eigenvalue());
    rneg = std::max(rneg, -p.residue);
    if (inst < 20) {
      cert = std::max(cert, residue_certificate(p, ab, quad));
      const auto proj = oracles::gram_affine_projection(ab, l2, quad);
      gram = std::max(gram, std::abs(p.residue - proj.residual_norm_sq));
      for (int k = 0; k < quad.size(); ++k) {
        const Mat3 v2 = quad.nodes[k] * Mat3::Identity() - p.mo.phi1;
        const SymMat2 vn = SymMat2::from_vec(v2 * p.n_star.vec());
        gram = std::max(gram, (vn - proj.ortho_part[k]).norm());
      }
    }
  }
  add(out, "effective.t2_star_positive", std::max(0.0, -t2pos), 0.0);
  add(out, "effective.residue_nonnegative", std::max(0.0, rneg), 1e-12);
  add(out, "effective.residue_certificate", cert, 1e-10);
  add(out, "effective.residue_gram_oracle", gram, 1e-10);

  // Affine exactness.
  {
    const QuadForm2 l2c = random_spd_form2(rng);
    std::vector<QuadForm2> l2(quad.size(), l2c);
    const SymMat2 b1 = random_sym2(rng);
    std::vector<SymMat2> ab(quad.size());
    for (int k = 0; k < quad.size(); ++k) ab[k] = b1 * quad.nodes[k];
    const PlatePoint p = effective_point(ab, l2, quad);
    add(out, "effective.linear_prestrain_recovers_slope", (p.n_star - b1).norm(), 1e-10);
    add(out, "effective.linear_prestrain_zero_residue", std::abs(p.residue), 1e-12);
  }

  // Quadrature convergence under node doubling; degree6 > 0 requests the
  // deliberately under-resolved variant (2 nodes on a degree-6 profile).
  {
    const int base = degree6 > 0 ? 2 : n_nodes;
    const ThicknessQuadrature qa = ThicknessQuadrature::gauss(base);
    const ThicknessQuadrature qb = ThicknessQuadrature::gauss(2 * base);
    const QuadForm2 l2c = random_spd_form2(rng);
    const SymMat2 b6 = random_sym2(rng);
    const auto run = [&](const ThicknessQuadrature& q) {
      std::vector<QuadForm2> l2(q.size(), l2c);
      std::vector<SymMat2> ab(q.size());
      for (int k = 0; k < q.size(); ++k)
        ab[k] = b6 * std::pow(q.nodes[k], degree6 > 0 ? 6 : 4);
      return effective_point(ab, l2, q);
    };
    const PlatePoint pa = run(qa), pb = run(qb);
    const double drift = std::max({(pa.t2_star.matrix() - pb.t2_star.matrix())
                                       .cwiseAbs()
                                       .maxCoeff(),
                                   (pa.n_star - pb.n_star).norm(),
                                   std::abs(pa.residue - pb.residue)});
    add(out, "effective.quadrature_convergence", drift, 1e-10);
  }
  return out;
}

inline std::vector<CheckResult> midsurface_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
  const Grid2 grid = Grid2::unit(12, 12);

  // Closed form vs direct convex solve on randomized instances.
  double equiv = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const bool cyl = inst % 2 == 0;
    const Midsurface s = build_surface(
        cyl ? SurfaceFamily::cylinder(2.0) : SurfaceFamily::plane(), grid);
    std::vector<SymMat3> coeffs;
    for (int k = 0; k < 4; ++k) coeffs.push_back(random_sym3(rng, 0.8));
    const PrestrainField pre =
        PrestrainField::uniform(SymMat3::identity(), TProfile::poly(coeffs));
    Q3Field q3f;
    if (inst % 3 == 0) {
      std::uniform_real_distribution<double> u(0.5, 2.0);
      const double mu = u(rng), la = u(rng);
      q3f = q3_isotropic(mu, la);
    } else {
      q3f = q3_constant(random_spd_form3(rng));
    }
    const PlateModel model = effective_model(grid, pre, q3f, quad);
    const GammaEnergyReport closed = gamma_energy(s, model, pre, 1e-2);
    const GammaEnergyReport direct = gamma_energy_direct(s, pre, q3f, quad, 1e-2);
    equiv = std::max(equiv, std::abs(closed.total - direct.total) /
                                std::max(1e-12, std::abs(direct.total)));
  }
  add(out, "midsurface.closed_form_equals_direct", equiv, 1e-8);

  // Frame invariance under a rigid motion.
  {
    const PrestrainField pre = PrestrainField::uniform(
        SymMat3::identity(), TProfile::linear(SymMat3(Mat3(random_sym3(rng, 0.5).mat()))));
    const Q3Field q3f = q3_isotropic(1.0, 1.0);
    const PlateModel model = effective_model(grid, pre, q3f, quad);
    const SurfaceFamily cyl = SurfaceFamily::cylinder(2.0);
    const Midsurface s0 = build_surface(cyl, grid);
    const Midsurface s1 =
        build_surface(cyl.moved(random_rotation(rng), Vec3(0.3, -1.0, 2.0)), grid);
    const double e0 = gamma_energy(s0, model, pre, 1e-2).total;
    const double e1 = gamma_energy(s1, model, pre, 1e-2).total;
    add(out, "midsurface.rigid_motion_invariance", std::abs(e0 - e1) / (1 + std::abs(e0)),
        1e-10);
  }

  // Cosserat consistency on a non-identity metric.
  {
    Mat3 gm;
    gm << 1, 0, 0.3, 0, 1, 0, 0.3, 0, 1.2;
    const SymMat3 g(gm);
    const Mat32 grad_y = (Mat32() << 1, 0, 0, 1, 0, 0).finished();
    const Vec3 b = cosserat(grad_y, g);
    Mat3 f;
    f.leftCols<2>() = grad_y;
    f.col(2) = b;
    add(out, "midsurface.cosserat_realizes_metric",
        (f.transpose() * f - gm).cwiseAbs().maxCoeff(), 1e-12);
  }
  return out;
}

inline std::vector<CheckResult> ansatz_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  // Corrugation identity, exact for constant targets.
  double corr = 0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    SymMat2 a(1.0 + std::abs(u(rng)), u(rng), u(rng));
    const CorrugationFields cf = corrugation_fields(a, 5.0 + 40.0 * std::abs(u(rng)));
    for (int p = 0; p < 25; ++p)
      corr = std::max(corr, cf.realization_residual(Vec2(u(rng), u(rng))));
  }
  add(out, "ansatz.corrugation_identity", corr, 1e-12);

  // Analytic vs finite-difference scaled gradients.
  const QuadForm3 q3 = QuadForm3::isotropic(1.0, 1.0);
  const TProfile b = TProfile::linear(random_sym3(rng, 0.4));
  {
    const Deformation3D def = wrinkled_flat_ansatz(SurfaceFamily::plane(),
                                                   SymMat2(0.5, 0.0, 0.0), 1.0, b, q3,
                                                   1e-2, 0.4);
    add(out, "ansatz.wrinkled_gradient_self_check",
        gradient_self_check(def, 20, 1e-5, seed + 1), 1e-6);
  }
  {
    const ThicknessQuadrature quad = ThicknessQuadrature::gauss(8);
    const Deformation3D def = curved_recovery_ansatz(
        SurfaceFamily::cylinder(2.0), SymMat2(0.5, 0.0, 0.0), b, q3, quad, 1e-2);
    add(out, "ansatz.curved_gradient_self_check",
        gradient_self_check(def, 20, 1e-5, seed + 2), 1e-6);
  }

  // Zero-energy rolled construction; energies nonnegative.
  const CylinderExampleReport ex1 = example_cylinder(1e-2, 2.0, 12, 6);
  add(out, "ansatz.rolled_cylinder_zero_energy", ex1.max_pointwise_energy, 1e-12);
  return out;
}

inline std::vector<CheckResult> regimes_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(6);
  const Grid2 grid = Grid2::unit(25, 25);
  const Q3Field q3f = q3_isotropic(1.0, 1.0);

  // Feasible-set inclusion and the compatible/incompatible dichotomy.
  {
    const PrestrainField compat = PrestrainField::make(
        [](const Vec2&) { return SymMat3::identity(); },
        [](const Vec2& x, double t) {
          // sym grad of g0 = (x1^2 - x2^2 + x1 x2, 2 x1 x2) plus a t-odd part.
          Mat3 m = Mat3::Zero();
          m(0, 0) = 2 * x[0] + x[1];
          m(1, 1) = 2 * x[0];
          m(0, 1) = m(1, 0) = 0.5 * x[0];
          Mat3 odd = Mat3::Zero();
          odd(0, 0) = 0.7;
          odd(1, 1) = -0.4;
          return SymMat3(Mat3(m + t * odd));
        });
    const GapResult g = restricted_gap(compat, q3f, grid, quad);
    add(out, "regimes.gap_feasible_inclusion", std::max(0.0, -g.gap), 1e-10);
    add(out, "regimes.gap_compatible_prestrain", std::abs(g.gap), 1e-8);
  }
  {
    const PrestrainField incompat = PrestrainField::make(
        [](const Vec2&) { return SymMat3::identity(); },
        [](const Vec2& x, double) {
          Mat3 m = Mat3::Zero();
          m(0, 0) = x[1] * x[1];
          return SymMat3(m);
        });
    const GapResult g = restricted_gap(incompat, q3f, grid, quad);
    add(out, "regimes.gap_incompatible_positive", g.gap > 1e-6 ? 0.0 : 1.0, 0.0);
  }

  // Nearest rotation: identity never beaten for commuting pairs.
  double beat = 0;
  for (int i = 0; i < 10; ++i) {
    const Mat3 r = random_rotation(rng);
    Vec3 la, ga;
    std::uniform_real_distribution<double> u(0.3, 3.0);
    for (int k = 0; k < 3; ++k) {
      la[k] = u(rng);
      ga[k] = u(rng);
    }
    const SymMat3 a(Mat3(r * la.asDiagonal() * r.transpose()));
    const SymMat3 m(Mat3(r * ga.asDiagonal() * r.transpose()));
    const RotationGapResult res = nearest_rotation_gap(a, m, 2000, seed + i);
    beat = std::max(beat, res.direct - res.sampled_min);
  }
  add(out, "regimes.identity_never_beaten", beat, 1e-12);

  // Zero-energy pathological families.
  add(out, "regimes.corner_zero_energy", example_corner(1e-2, 1.0).max_pointwise_energy,
      1e-12);
  {
    const MetricSequenceReport osc =
        example_oscillation({1e-2, 1e-3, 1e-4, 1e-5}, 2.3, 1.2, 512, 6);
    double emax = 0;
    for (const auto& row : osc.rows) emax = std::max(emax, row.max_pointwise_energy);
    add(out, "regimes.oscillation_zero_energy", emax, 1e-12);
    add(out, "regimes.oscillation_divergence_exponent",
        std::abs(osc.l2_over_h3_exponent - 2 * (2.3 - 2 * 1.2)), 0.05);
  }
  return out;
}

inline std::vector<CheckResult> run_all(std::uint64_t seed) {
  std::vector<CheckResult> all;
  for (auto&& suite : {symalg_suite(seed), elastic_suite(seed + 1), relax_suite(seed + 2),
                       effective_suite(seed + 3), midsurface_suite(seed + 4),
                       ansatz_suite(seed + 5), regimes_suite(seed + 6)})
    all.insert(all.end(), suite.begin(), suite.end());
  return all;
}

}  // namespace verify
}  // namespace platelim
