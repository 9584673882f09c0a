#pragma once

// Batch pipelines behind the CLI subcommands. Each command reads the parsed
// config, writes CSV artifacts under the output directory, and returns the
// process exit code (0 ok, 1 invariant failure, 2 config error, 3 numerical
// error; 2 and 3 are raised as exceptions and mapped by the caller).

#include <filesystem>
#include <iostream>
#include <sstream>

#include "platelim/config.hpp"
#include "platelim/io.hpp"
#include "platelim/verify.hpp"

namespace platelim {

inline std::string run_preamble(const RunConfig& cfg, const std::string& cmd) {
  const std::string canon = serialize_config(cfg).dump();
  std::ostringstream os;
  os << "platelim v1 cmd=" << cmd << " seed=" << cfg.seed
     << " config_fnv=" << std::hex << fnv1a64(canon);
  return os.str();
}

inline std::string out_path(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / name).string();
}

inline int cmd_reduce(const RunConfig& cfg, const std::string& out_dir) {
  const PrestrainField pre = build_prestrain(cfg.prestrain);
  const ElasticLaw law = build_law(cfg.law);
  const Q3Field q3f = q3_from_law(law);
  const TProfile profile = build_profile(cfg.prestrain);
  const ThicknessQuadrature quad = profile.quadrature(cfg.quadrature_nodes);
  const Grid2 grid = build_grid(cfg.surface);
  const PlateModel model = effective_model(grid, pre, q3f, quad, cfg.threads);

  Table table({"x1", "x2", "t11", "t12", "t13", "t22", "t23", "t33", "n11", "n22", "n12",
               "residue"});
  double min_eig = 1e300, total_r = 0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const int n = grid.idx(i, j);
      const Vec2 x = grid.point(i, j);
      const PlatePoint& p = model.pts[n];
      const Mat3& t = p.t2_star.matrix();
      table.add_row({x[0], x[1], t(0, 0), t(0, 1), t(0, 2), t(1, 1), t(1, 2), t(2, 2),
                     p.n_star(0, 0), p.n_star(1, 1), p.n_star(0, 1), p.residue});
      min_eig = std::min(min_eig, p.t2_star.min_eigenvalue());
      total_r += grid.trapezoid_weight(i, j) * p.residue;
    }
  table.add_summary("min_eig_t2star", min_eig);
  table.add_summary("total_residue", total_r);
  table.write(out_path(out_dir, "reduce.csv"), run_preamble(cfg, "reduce"));
  std::cout << "reduce: wrote " << out_path(out_dir, "reduce.csv") << "\n";
  return 0;
}

inline int cmd_energy(const RunConfig& cfg, const std::string& out_dir) {
  const PrestrainField pre = build_prestrain(cfg.prestrain);
  const ElasticLaw law = build_law(cfg.law);
  const Q3Field q3f = q3_from_law(law);
  const TProfile profile = build_profile(cfg.prestrain);
  const ThicknessQuadrature quad = profile.quadrature(cfg.quadrature_nodes);
  const Grid2 grid = build_grid(cfg.surface);
  const Midsurface s = build_surface(build_surface_family(cfg.surface), grid);
  const PlateModel model = effective_model(grid, pre, q3f, quad, cfg.threads);

  const GammaEnergyReport closed = gamma_energy(s, model, pre, cfg.isometry_tol);
  const GammaEnergyReport direct =
      gamma_energy_direct(s, pre, q3f, quad, cfg.isometry_tol, cfg.threads);

  Table table({"x1", "x2", "density_closed", "density_direct"});
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const int n = grid.idx(i, j);
      const Vec2 x = grid.point(i, j);
      table.add_row({x[0], x[1], closed.density[n], direct.density[n]});
    }
  table.add_summary("total_closed", closed.total);
  table.add_summary("total_direct", direct.total);
  table.add_summary("rel_difference",
                    std::abs(closed.total - direct.total) /
                        std::max(1e-300, std::abs(direct.total)));
  table.add_summary("isometry_max", closed.isometry_max);
  table.write(out_path(out_dir, "energy.csv"), run_preamble(cfg, "energy"));
  std::cout << "energy: closed=" << fmt_double(closed.total)
            << " direct=" << fmt_double(direct.total) << "\n";
  return 0;
}

namespace detail {

inline int write_sweep(const SweepResult& sweep, const RunConfig& cfg,
                       const std::string& out_dir, const std::string& cmd,
                       double extra_residual = -1.0) {
  Table table({"h", "energy", "error"});
  for (const auto& r : sweep.rows) table.add_row({r.h, r.energy, r.error});
  table.add_summary("target", sweep.target);
  table.add_summary("final_rel_error", sweep.final_rel_error);
  table.add_summary("fitted_rate", sweep.rate_applicable ? sweep.fitted_rate : 0.0);
  table.add_summary("rate_applicable", sweep.rate_applicable ? "yes" : "no");
  table.add_summary("monotone_tail", sweep.monotone_tail ? "yes" : "no");
  if (extra_residual >= 0) table.add_summary("corrugation_residual", extra_residual);
  table.write(out_path(out_dir, cmd + ".csv"), run_preamble(cfg, cmd));
  std::cout << cmd << ": target=" << fmt_double(sweep.target)
            << " final_rel_error=" << fmt_double(sweep.final_rel_error) << "\n";
  return sweep.final_rel_error <= cfg.sweep.max_final_rel_error ? 0 : 1;
}

}  // namespace detail

// Curved recovery sweep toward the plate energy of the configured surface.
inline int cmd_sweep(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.surface.family == "sphere")
    throw ConfigError("sweep: recovery construction needs plane or cylinder surface");
  if (cfg.prestrain.b_kind != "poly")
    throw ConfigError("sweep: recovery construction needs a polynomial prestrain profile");
  const PrestrainField pre = build_prestrain(cfg.prestrain);
  if (!cfg.prestrain.abar_identity)
    throw ConfigError("sweep: recovery construction requires Abar = Id");
  const ElasticLaw law = build_law(cfg.law);
  const QuadForm3 q3 = q3_from_law(law)(Vec2(0, 0), 0.0);
  const TProfile profile = build_profile(cfg.prestrain);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(cfg.quadrature_nodes);
  const Grid2 grid = build_grid(cfg.surface);
  const SurfaceFamily fam = build_surface_family(cfg.surface);
  const Midsurface s = build_surface(fam, grid);
  const PlateModel model = effective_model(grid, pre, q3_constant(q3), quad, cfg.threads);
  const double target = gamma_energy(s, model, pre, cfg.isometry_tol).total;

  const SymMat2 second_form = (cfg.surface.family == "cylinder")
                                  ? SymMat2(1.0 / cfg.surface.radius, 0.0, 0.0)
                                  : SymMat2();
  const SweepResult sweep = h_sweep(
      [&](double h) {
        const Deformation3D def =
            curved_recovery_ansatz(fam, second_form, profile, q3, quad, h);
        return energy3d(def, pre, law, grid, quad, cfg.threads);
      },
      cfg.sweep.h_list, target);
  return detail::write_sweep(sweep, cfg, out_dir, "sweep");
}

// Wrinkled flat sweep toward (1/2) int Q2(s - B_2x2).
inline int cmd_wrinkle(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.prestrain.b_kind != "poly")
    throw ConfigError("wrinkle: needs a polynomial prestrain profile");
  if (!cfg.prestrain.abar_identity)
    throw ConfigError("wrinkle: requires Abar = Id");
  const PrestrainField pre = build_prestrain(cfg.prestrain);
  const ElasticLaw law = build_law(cfg.law);
  const QuadForm3 q3 = q3_from_law(law)(Vec2(0, 0), 0.0);
  const TProfile profile = build_profile(cfg.prestrain);
  const ThicknessQuadrature quad = ThicknessQuadrature::gauss(cfg.quadrature_nodes);
  const SymMat2 s_target(cfg.sweep.s(0, 0), cfg.sweep.s(1, 1),
                         0.5 * (cfg.sweep.s(0, 1) + cfg.sweep.s(1, 0)));

  const RelaxedForm rf = relax(q3, SymMat3::identity());
  const double area = (cfg.surface.x1 - cfg.surface.x0) * (cfg.surface.y1 - cfg.surface.y0);
  double target = 0;
  for (int k = 0; k < quad.size(); ++k)
    target += 0.5 * area * quad.weights[k] *
              rf.q2(s_target - profile.eval(quad.nodes[k]).block2x2());

  double corr_residual = 0;
  const SweepResult sweep = h_sweep(
      [&](double h) {
        const Deformation3D def = wrinkled_flat_ansatz(
            SurfaceFamily::plane(), s_target, cfg.sweep.k_shift, profile, q3, h,
            cfg.sweep.gamma);
        const double lam = std::pow(h, -cfg.sweep.gamma);
        const CorrugationFields cf =
            corrugation_fields(s_target + cfg.sweep.k_shift * SymMat2::identity(), lam);
        for (int p = 0; p < 64; ++p)
          corr_residual = std::max(
              corr_residual,
              cf.realization_residual(Vec2(cfg.surface.x0 + (p + 0.5) / 64.0 *
                                                                (cfg.surface.x1 - cfg.surface.x0),
                                           0.5)));
        // Resolve the corrugation in the midplane quadrature.
        const int nx =
            std::max(cfg.surface.nx,
                     1 + static_cast<int>(std::ceil(18.0 * lam * (cfg.surface.x1 - cfg.surface.x0))));
        const Grid2 grid = Grid2::box(cfg.surface.x0, cfg.surface.x1, cfg.surface.y0,
                                      cfg.surface.y1, nx, cfg.surface.ny);
        return energy3d(def, pre, law, grid, quad, cfg.threads);
      },
      cfg.sweep.h_list, target);
  return detail::write_sweep(sweep, cfg, out_dir, "wrinkle", corr_residual);
}

inline int cmd_regimes(const RunConfig& cfg, const std::string& out_dir) {
  int rc = 0;
  {
    Table table({"h", "alpha", "max_pointwise_energy", "surface_amplitude",
                 "l2_defect_sq"});
    for (double h : {1e-1, 1e-2, 1e-3})
      for (double alpha : {0.5, 1.0, 2.0}) {
        const CylinderExampleReport r = example_cylinder(h, alpha);
        table.add_row({r.h, r.alpha, r.max_pointwise_energy, r.surface_amplitude,
                       r.l2_defect_sq});
        if (r.max_pointwise_energy > 1e-12) rc = 1;
      }
    table.write(out_path(out_dir, "regimes_cylinder.csv"), run_preamble(cfg, "regimes"));
  }
  {
    const CornerExampleReport r = example_corner(1e-2, 1.0);
    Table table({"h", "lambda", "r", "max_pointwise_energy", "sup_metric_defect",
                 "expected_sup_defect", "l1_metric_defect", "curvature_peak",
                 "expected_curvature"});
    table.add_row({r.h, r.lambda, r.r, r.max_pointwise_energy, r.sup_metric_defect,
                   r.expected_sup_defect, r.l1_metric_defect, r.curvature_peak,
                   r.expected_curvature});
    table.write(out_path(out_dir, "regimes_corner.csv"), run_preamble(cfg, "regimes"));
    if (r.max_pointwise_energy > 1e-12) rc = 1;
  }
  {
    const MetricSequenceReport r =
        example_oscillation({1e-2, 1e-3, 1e-4, 1e-5}, 2.3, 1.2);
    Table table({"h", "l2_defect_sq", "l1_metric_defect", "l2_metric_defect_sq",
                 "max_pointwise_energy"});
    for (const auto& row : r.rows)
      table.add_row({row.h, row.l2_defect_sq, row.l1_metric_defect,
                     row.l2_metric_defect_sq, row.max_pointwise_energy});
    table.add_summary("l2_over_h3_exponent", r.l2_over_h3_exponent);
    table.add_summary("metric_l2_exponent", r.metric_l2_exponent);
    table.add_summary("divergence", r.divergence ? "yes" : "no");
    table.write(out_path(out_dir, "regimes_oscillation.csv"), run_preamble(cfg, "regimes"));
  }
  {
    std::mt19937_64 rng(cfg.seed);
    Table table({"pair", "commuting", "direct", "sampled_min", "beating_norm"});
    for (int i = 0; i < 5; ++i) {
      const Mat3 r = random_rotation(rng);
      Vec3 la, ga;
      std::uniform_real_distribution<double> u(0.3, 3.0);
      for (int k = 0; k < 3; ++k) {
        la[k] = u(rng);
        ga[k] = u(rng);
      }
      const SymMat3 a(Mat3(r * la.asDiagonal() * r.transpose()));
      const SymMat3 m(Mat3(r * ga.asDiagonal() * r.transpose()));
      const RotationGapResult res = nearest_rotation_gap(a, m, 20000, cfg.seed + i);
      table.add_row({double(i), 1.0, res.direct, res.sampled_min, res.direct});
      if (!res.id_optimal) rc = 1;
    }
    // A non-commuting pair with its polar-decomposition witness.
    Mat3 am;
    am << 2, 0.4, 0, 0.4, 1, 0, 0, 0, 1.5;
    Mat3 mm;
    mm << 1, 0, 0.5, 0, 2, 0, 0.5, 0, 1;
    const SymMat3 a(am), m(mm);
    const Mat3 q = beating_rotation(a, m);
    table.add_row({5.0, 0.0, (a.mat() - m.mat()).norm(), -1.0,
                   (a.mat() - q * m.mat()).norm()});
    table.write(out_path(out_dir, "regimes_rotation.csv"), run_preamble(cfg, "regimes"));
  }
  {
    Table table({"family", "l1_exponent", "inplane_exponent", "metric_l2_exponent",
                 "avg_grad_exponent", "h2_consistent"});
    const std::vector<double> hs = {1e-1, 1e-2, 1e-3};
    const MetricSequenceReport r1 = order_h_diagnostic(sequence_example1(0.5), hs);
    table.add_row({0.0, r1.l1_exponent, r1.inplane_exponent, r1.metric_l2_exponent,
                   r1.avg_grad_exponent, r1.h2_consistent ? 1.0 : 0.0});
    const MetricSequenceReport r2 = order_h_diagnostic(
        sequence_bounded(SymMat3::identity(),
                         TProfile::linear(SymMat3(Mat3(0.3 * Mat3::Identity())))),
        hs);
    table.add_row({1.0, r2.l1_exponent, r2.inplane_exponent, r2.metric_l2_exponent,
                   r2.avg_grad_exponent, r2.h2_consistent ? 1.0 : 0.0});
    const MetricSequenceReport r3 = order_h_diagnostic(sequence_checkerboard(2.0, 3.0), hs, 96);
    table.add_row({2.0, r3.l1_exponent, r3.inplane_exponent, r3.metric_l2_exponent,
                   r3.avg_grad_exponent, r3.h2_consistent ? 1.0 : 0.0});
    table.write(out_path(out_dir, "regimes_orderh.csv"), run_preamble(cfg, "regimes"));
  }
  {
    const Q3Field q3f = q3_from_law(build_law(cfg.law));
    const ThicknessQuadrature quad = ThicknessQuadrature::gauss(6);
    const Grid2 grid = Grid2::unit(25, 25);
    const PrestrainField incompat = PrestrainField::make(
        [](const Vec2&) { return SymMat3::identity(); },
        [](const Vec2& x, double) {
          Mat3 m = Mat3::Zero();
          m(0, 0) = x[1] * x[1];
          return SymMat3(m);
        });
    const GapResult g = restricted_gap(incompat, q3f, grid, quad, cfg.threads);
    Table table({"restricted", "unrestricted", "gap", "iterations", "residual"});
    table.add_row({g.restricted, g.unrestricted, g.gap, double(g.iterations), g.residual});
    table.write(out_path(out_dir, "regimes_gap.csv"), run_preamble(cfg, "regimes"));
    if (g.gap < -1e-10) rc = 1;
  }
  std::cout << "regimes: wrote tables under " << out_dir << "\n";
  return rc;
}

inline int cmd_verify(const RunConfig& cfg, const std::string& out_dir) {
  std::vector<CheckResult> checks;
  // Error-path probe: a configured non-builtin law must be rejected by the
  // Hessian extraction.
  if (cfg.law.family == "unstable-quadratic") {
    bool caught = false;
    try {
      hessian_at_identity(build_law(cfg.law), Vec2(0, 0), 0.0);
    } catch (const HessianNotPSD&) {
      caught = true;
    }
    checks.push_back({"elastic.unstable_law_rejected(HessianNotPSD)", caught ? 0.0 : 1.0,
                      0.0});
  }
  const int degree =
      cfg.prestrain.b_kind == "poly" ? static_cast<int>(cfg.prestrain.coeffs.size()) - 1 : 0;
  const bool under_resolved = degree >= 6 && cfg.quadrature_nodes <= 2;
  auto all = verify::run_all(cfg.seed);
  checks.insert(checks.end(), all.begin(), all.end());
  if (under_resolved) {
    auto degraded = verify::effective_suite(cfg.seed + 99, cfg.quadrature_nodes, 1);
    for (auto& c : degraded) c.name += "(under-resolved)";
    checks.insert(checks.end(), degraded.begin(), degraded.end());
  }

  int failures = 0;
  std::ofstream f(out_path(out_dir, "verify.csv"), std::ios::binary);
  f << "# " << run_preamble(cfg, "verify") << "\n";
  f << "name,violation,tol,pass\n";
  for (const auto& c : checks) {
    const bool ok = c.pass();
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.name
              << " violation=" << fmt_double(c.violation) << " tol=" << fmt_double(c.tol)
              << "\n";
    f << c.name << ',' << fmt_double(c.violation) << ',' << fmt_double(c.tol) << ','
      << (ok ? 1 : 0) << "\n";
  }
  std::cout << (failures == 0 ? "verify: all checks passed\n"
                              : "verify: " + std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace platelim
