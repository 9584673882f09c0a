#pragma once

// Recovery sequences for the 3D energy: the wrinkled flat construction
// (single-mode corrugation realizing a constant in-plane target exactly) and
// the curved Kirchhoff-type construction, both with analytic scaled gradients
// grad^h y^h = (grad' y^h, h^-1 d3 y^h); plus the 3D energy quadrature and
// h-sweeps against an independently computed limit.

#include <cmath>

#include "platelim/energy.hpp"
#include "platelim/prestrain.hpp"
#include "platelim/surface.hpp"

namespace platelim {

template <class T>
T poly_zero();
template <>
inline Vec3 poly_zero<Vec3>() { return Vec3::Zero(); }
template <>
inline SymMat2 poly_zero<SymMat2>() { return SymMat2(); }
template <>
inline SymMat3 poly_zero<SymMat3>() { return SymMat3(); }

// Polynomial in the thickness coordinate with x'-independent coefficients.
template <class T>
struct TPoly {
  std::vector<T> c;

  T eval(double t) const {
    T acc = poly_zero<T>();
    double tk = 1.0;
    for (const auto& ck : c) {
      acc = acc + tk * ck;
      tk *= t;
    }
    return acc;
  }

  // Antiderivative vanishing at t = 0.
  TPoly<T> antiderivative() const {
    TPoly<T> a;
    a.c.resize(c.size() + 1, poly_zero<T>());
    for (std::size_t k = 0; k < c.size(); ++k) a.c[k + 1] = c[k] * (1.0 / (k + 1));
    return a;
  }
};

struct VecField3 {
  std::function<Vec3(const Vec2&)> value;
  std::function<Mat32(const Vec2&)> grad;

  static VecField3 zero() {
    VecField3 f;
    f.value = [](const Vec2&) { return Vec3::Zero(); };
    f.grad = [](const Vec2&) { return Mat32::Zero(); };
    return f;
  }
};

struct Deformation3D {
  double h = 0;
  std::string family;
  std::function<Vec3(const Vec2&, double)> value;       // (x', x3)
  std::function<Mat3(const Vec2&, double)> grad_scaled; // analytic grad^h
};

// Max relative deviation between the analytic scaled gradient and central
// differences of the evaluator, at random probes.
inline double gradient_self_check(const Deformation3D& def, int n_probes, double step,
                                  std::uint64_t seed, const Vec2& lo = Vec2(0.05, 0.05),
                                  const Vec2& hi = Vec2(0.95, 0.95)) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]),
      ut(-0.45, 0.45);
  double worst = 0;
  for (int p = 0; p < n_probes; ++p) {
    const Vec2 x(ux(rng), uy(rng));
    const double t = ut(rng);
    Mat3 fd;
    for (int j = 0; j < 2; ++j) {
      Vec2 xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      fd.col(j) = (def.value(xp, t) - def.value(xm, t)) / (2 * step);
    }
    fd.col(2) = (def.value(x, t + step) - def.value(x, t - step)) / (2 * step * def.h);
    const Mat3 an = def.grad_scaled(x, t);
    worst = std::max(worst, (an - fd).cwiseAbs().maxCoeff() /
                                (1.0 + an.cwiseAbs().maxCoeff()));
  }
  return worst;
}

// Single-mode corrugation realizing (1/2) grad v x grad v + sym grad w = A
// exactly for a constant symmetric target with A11 >= 0.
struct CorrugationFields {
  SymMat2 target;
  double lambda = 1;
  double amp = 0;  // sqrt(2 A11)

  double v(const Vec2& x) const { return amp / lambda * std::sin(lambda * x[0]); }
  Vec2 grad_v(const Vec2& x) const { return Vec2(amp * std::cos(lambda * x[0]), 0.0); }
  Mat2 hess_v(const Vec2& x) const {
    Mat2 m = Mat2::Zero();
    m(0, 0) = -amp * lambda * std::sin(lambda * x[0]);
    return m;
  }
  double grad_v_sq(const Vec2& x) const {
    const double c = std::cos(lambda * x[0]);
    return amp * amp * c * c;
  }
  Vec2 grad_of_grad_v_sq(const Vec2& x) const {
    return Vec2(-amp * amp * lambda * std::sin(2 * lambda * x[0]), 0.0);
  }
  Vec2 w(const Vec2& x) const {
    const double a11 = target(0, 0);
    return Vec2(a11 * (0.5 * x[0] - std::sin(2 * lambda * x[0]) / (4 * lambda)),
                2 * target(0, 1) * x[0] + target(1, 1) * x[1]);
  }
  // grad_w(i, j) = d w_i / d x_j
  Mat2 grad_w(const Vec2& x) const {
    const double s = std::sin(lambda * x[0]);
    Mat2 m;
    m << target(0, 0) * s * s, 0.0, 2 * target(0, 1), target(1, 1);
    return m;
  }
  // || A - ((1/2) grad v x grad v + sym grad w) ||_F
  double realization_residual(const Vec2& x) const {
    const Vec2 gv = grad_v(x);
    const Mat2 got = 0.5 * gv * gv.transpose() + sym(grad_w(x));
    return (target.mat() - got).norm();
  }
};

inline CorrugationFields corrugation_fields(const SymMat2& a, double lambda) {
  if (a(0, 0) < 0) throw BadTarget("corrugation_fields: target A11 must be >= 0");
  if (!(lambda > 0)) throw BadTarget("corrugation_fields: wavenumber must be positive");
  CorrugationFields c;
  c.target = a;
  c.lambda = lambda;
  c.amp = std::sqrt(2.0 * a(0, 0));
  return c;
}

// The out-of-plane sym(d x e3) column of -B (third column/row content, moved
// into the free direction).
inline Vec3 third_col_content(const SymMat3& b) {
  return Vec3(2 * b(0, 2), 2 * b(1, 2), b(2, 2));
}

// Optimal out-of-plane polynomial for an in-plane target Z(t) and prestrain B(t):
// d(t) = c_min(Z(t)) + third-column content of B(t). Coefficient-wise since
// c_min is linear.
inline TPoly<Vec3> optimal_out_of_plane(const RelaxedForm& rf,
                                        const std::vector<SymMat2>& z_coeffs,
                                        const TProfile& b) {
  if (b.kind != TProfile::Kind::Poly)
    throw Error("optimal_out_of_plane: polynomial thickness profile required");
  TPoly<Vec3> d;
  const std::size_t n = std::max(z_coeffs.size(), b.coeffs.size());
  d.c.resize(n, Vec3::Zero());
  for (std::size_t k = 0; k < n; ++k) {
    Vec3 dk = Vec3::Zero();
    if (k < z_coeffs.size()) dk += rf.c_min(z_coeffs[k]);
    if (k < b.coeffs.size()) dk += third_col_content(b.coeffs[k]);
    d.c[k] = dk;
  }
  return d;
}

inline TPoly<Vec3> make_wrinkled_d(const RelaxedForm& rf, const SymMat2& s, double k_shift,
                                   const TProfile& b) {
  std::vector<SymMat2> z;
  const std::size_t n = std::max<std::size_t>(1, b.coeffs.size());
  z.resize(n, SymMat2());
  for (std::size_t k = 0; k < n; ++k) {
    SymMat2 zk = (k < b.coeffs.size()) ? -b.coeffs[k].block2x2() : SymMat2();
    if (k == 0) zk = zk + s;
    z[k] = zk;
  }
  TPoly<Vec3> d = optimal_out_of_plane(rf, z, b);
  d.c[0] += k_shift * Vec3::UnitZ();
  return d;
}

inline TPoly<Vec3> make_curved_d(const RelaxedForm& rf, const SymMat2& s,
                                 const SymMat2& second_form, const TProfile& b) {
  std::vector<SymMat2> z;
  const std::size_t n = std::max<std::size_t>(2, b.coeffs.size());
  z.resize(n, SymMat2());
  for (std::size_t k = 0; k < n; ++k) {
    SymMat2 zk = (k < b.coeffs.size()) ? -b.coeffs[k].block2x2() : SymMat2();
    if (k == 0) zk = zk + s;
    if (k == 1) zk = zk + second_form;
    z[k] = zk;
  }
  return optimal_out_of_plane(rf, z, b);
}

// Flat wrinkled recovery deformation. Seven terms:
//   (1-hK) y,  h x3 (1-Kh) nu,  h Q w^h,  h^2 Q D^h,  h^(1/2) Q (0,0,v^h),
//   -h^(3/2) x3 Q grad v^h,  -(1/2) h^2 x3 Q (0,0,|grad v^h|^2)
// with corrugation target A = s + K Id at wavenumber lambda_h = h^-gamma.
inline Deformation3D wrinkled_flat_ansatz(const SurfaceFamily& base, const SymMat2& s,
                                          double k_shift, const TProfile& b,
                                          const QuadForm3& q3, double h, double gamma) {
  if (base.normal_jacobian) {
    for (const Vec2& probe : {Vec2(0.2, 0.3), Vec2(0.7, 0.6), Vec2(0.5, 0.9)}) {
      if (base.normal_jacobian(probe).cwiseAbs().maxCoeff() > 1e-12)
        throw PreconditionII("wrinkled_flat_ansatz: base surface is not flat");
    }
  }
  if (!(gamma > 0) || !(gamma < 0.5))
    throw Error("wrinkled_flat_ansatz: need 0 < gamma < 1/2");
  const SymMat2 a_target = s + k_shift * SymMat2::identity();
  if (a_target(0, 0) <= 0)
    throw BadTarget("wrinkled_flat_ansatz: s + K Id must have positive (1,1) entry");
  const double lambda = std::pow(h, -gamma);
  const CorrugationFields cf = corrugation_fields(a_target, lambda);
  const RelaxedForm rf = relax(q3, SymMat3::identity());
  const TPoly<Vec3> d = make_wrinkled_d(rf, s, k_shift, b);
  const TPoly<Vec3> dcap = d.antiderivative();

  Deformation3D def;
  def.h = h;
  def.family = "wrinkled-flat";
  const double sh = std::sqrt(h);
  def.value = [=](const Vec2& x, double t) {
    const Vec2 w = cf.w(x);
    const Vec2 gv = cf.grad_v(x);
    Vec3 p = (1 - h * k_shift) * Vec3(x[0], x[1], 0.0);
    p += h * t * (1 - k_shift * h) * Vec3::UnitZ();
    p += h * Vec3(w[0], w[1], 0.0);
    p += h * h * dcap.eval(t);
    p += sh * cf.v(x) * Vec3::UnitZ();
    p -= h * sh * t * Vec3(gv[0], gv[1], 0.0);
    p -= 0.5 * h * h * t * cf.grad_v_sq(x) * Vec3::UnitZ();
    return p;
  };
  def.grad_scaled = [=](const Vec2& x, double t) {
    const Mat2 gw = cf.grad_w(x);
    const Vec2 gv = cf.grad_v(x);
    const Mat2 hv = cf.hess_v(x);
    const Vec2 ggv2 = cf.grad_of_grad_v_sq(x);
    Mat3 f = Mat3::Zero();
    for (int j = 0; j < 2; ++j) {
      Vec3 col = (1 - h * k_shift) * Vec3::Unit(j);
      col += h * Vec3(gw(0, j), gw(1, j), 0.0);
      col += sh * gv[j] * Vec3::UnitZ();
      col -= h * sh * t * Vec3(hv(0, j), hv(1, j), 0.0);
      col -= 0.5 * h * h * t * ggv2[j] * Vec3::UnitZ();
      f.col(j) = col;
    }
    Vec3 c3 = (1 - k_shift * h) * Vec3::UnitZ();
    c3 += h * d.eval(t);
    c3 -= sh * Vec3(gv[0], gv[1], 0.0);
    c3 -= 0.5 * h * cf.grad_v_sq(x) * Vec3::UnitZ();
    f.col(2) = c3;
    return f;
  };
  return def;
}

// Curved Kirchhoff-type recovery deformation:
//   y^h = y + h [x3 nu + Q g] + h^2 Q D^h,   Q = [grad y | nu].
// Needs the chart's analytic derivatives; d has x'-constant coefficients.
inline Deformation3D kirchhoff_curved_ansatz(const SurfaceFamily& surf, const VecField3& g,
                                             const TPoly<Vec3>& d, double h) {
  if (!surf.analytic())
    throw Error("kirchhoff_curved_ansatz: chart must provide analytic derivatives");
  const TPoly<Vec3> dcap = d.antiderivative();
  Deformation3D def;
  def.h = h;
  def.family = "kirchhoff-curved";
  def.value = [surf, g, dcap, h](const Vec2& x, double t) {
    Mat3 q;
    q.leftCols<2>() = surf.jacobian(x);
    q.col(2) = surf.normal(x);
    return Vec3(surf.value(x) + h * (t * surf.normal(x) + q * g.value(x)) +
                h * h * (q * dcap.eval(t)));
  };
  def.grad_scaled = [surf, g, d, dcap, h](const Vec2& x, double t) {
    const Mat32 jac = surf.jacobian(x);
    const Mat32 dnu = surf.normal_jacobian(x);
    Mat3 q;
    q.leftCols<2>() = jac;
    q.col(2) = surf.normal(x);
    const Vec3 gval = g.value(x);
    const Mat32 ggrad = g.grad(x);
    const Vec3 dval = dcap.eval(t);
    Mat3 f = Mat3::Zero();
    for (int j = 0; j < 2; ++j) {
      Mat3 dq;
      dq.col(0) = surf.second_derivative(x, j, 0);
      dq.col(1) = surf.second_derivative(x, j, 1);
      dq.col(2) = dnu.col(j);
      Vec3 col = jac.col(j);
      col += h * (t * dnu.col(j) + dq * gval + q * ggrad.col(j));
      col += h * h * (dq * dval);
      f.col(j) = col;
    }
    f.col(2) = surf.normal(x) + h * (q * d.eval(t));
    return f;
  };
  return def;
}

// Schmidt-type decomposition of a constant in-plane target on the built-in
// charts: s = sym grad g' + g3 II. On the cylinder (II = diag(1/rho, 0)) the
// target must have s12 = 0 so that the x'-gradient terms entering the optimal
// out-of-plane correction stay constant.
inline VecField3 make_target_g(const SymMat2& s, const SymMat2& second_form) {
  const double kappa = second_form(0, 0);
  if (second_form.norm() < 1e-12) {
    // Flat chart: realize s entirely by the in-plane displacement.
    VecField3 g;
    const Mat2 sm = s.mat();
    g.value = [sm](const Vec2& x) {
      const Vec2 v = sm * x;
      return Vec3(v[0], v[1], 0.0);
    };
    g.grad = [sm](const Vec2&) {
      Mat32 m = Mat32::Zero();
      m.topLeftCorner<2, 2>() = sm;
      return m;
    };
    return g;
  }
  if (std::abs(second_form(0, 1)) > 1e-12 || std::abs(second_form(1, 1)) > 1e-12 ||
      !(kappa > 0))
    throw Error("make_target_g: expected second form diag(kappa, 0), kappa > 0");
  if (std::abs(s(0, 1)) > 1e-12)
    throw Error("make_target_g: cylinder targets need s12 = 0 (see notes)");
  const double g3 = s(0, 0) / kappa;
  const double s22 = s(1, 1);
  VecField3 g;
  g.value = [g3, s22](const Vec2& x) { return Vec3(0.0, s22 * x[1], g3); };
  g.grad = [s22](const Vec2&) {
    Mat32 m = Mat32::Zero();
    m(1, 1) = s22;
    return m;
  };
  return g;
}

// End-to-end recovery construction targeting the limiting plate energy: picks
// the pointwise-optimal in-plane strain s* = phi((Abar B)_2x2) - phi1(II) and
// the matching out-of-plane correction, then assembles the curved ansatz.
inline Deformation3D curved_recovery_ansatz(const SurfaceFamily& surf,
                                            const SymMat2& second_form, const TProfile& b,
                                            const QuadForm3& q3,
                                            const ThicknessQuadrature& quad, double h) {
  const RelaxedForm rf = relax(q3, SymMat3::identity());
  std::vector<SymMat2> ab(quad.size());
  std::vector<QuadForm2> l2(quad.size(), rf.q2);
  for (int i = 0; i < quad.size(); ++i) ab[i] = b.eval(quad.nodes[i]).block2x2();
  const PlatePoint p = effective_point(ab, l2, quad);
  const SymMat2 s_opt = p.optimal_in_plane(second_form);
  const VecField3 g = make_target_g(s_opt, second_form);
  const TPoly<Vec3> d = make_curved_d(rf, s_opt, second_form, b);
  return kirchhoff_curved_ansatz(surf, g, d, h);
}

struct Energy3DReport {
  double value = 0;      // E^h / h^2
  double max_point = 0;  // max over quadrature points of W / h^2
};

inline Energy3DReport energy3d_report(const Deformation3D& def,
                                      const std::function<Mat3(const Vec2&, double)>& a_h,
                                      const ElasticLaw& law, const Grid2& grid,
                                      const ThicknessQuadrature& quad, int threads = 1) {
  if (!(def.h > 0)) throw Error("energy3d: h must be positive");
  std::vector<double> node_sum(grid.count(), 0.0);
  std::vector<double> node_max(grid.count(), 0.0);
  parallel_for(grid.count(), threads, [&](int n) {
    const int i = n % grid.nx, j = n / grid.nx;
    const Vec2 x = grid.point(i, j);
    double acc = 0, mx = 0;
    for (int k = 0; k < quad.size(); ++k) {
      const double t = quad.nodes[k];
      const Mat3 a = a_h(x, t);
      Eigen::FullPivLU<Mat3> lu(a);
      if (!lu.isInvertible() ||
          std::abs(a.determinant()) < 1e-12 * (1 + a.cwiseAbs().maxCoeff()))
        throw SingularPrestrain("energy3d: A^h singular at a quadrature point");
      const Mat3 arg = def.grad_scaled(x, t) * lu.inverse();
      const double w = law.w(x, t, arg) / (def.h * def.h);
      acc += quad.weights[k] * w;
      mx = std::max(mx, w);
    }
    node_sum[n] = grid.trapezoid_weight(i, j) * acc;
    node_max[n] = mx;
  });
  Energy3DReport rep;
  rep.value = pairwise_sum(std::move(node_sum));
  for (double m : node_max) rep.max_point = std::max(rep.max_point, m);
  return rep;
}

inline Energy3DReport energy3d_report(const Deformation3D& def, const PrestrainField& pre,
                                      const ElasticLaw& law, const Grid2& grid,
                                      const ThicknessQuadrature& quad, int threads = 1) {
  const double h = def.h;
  return energy3d_report(
      def, [&pre, h](const Vec2& x, double t) { return pre.a_h(x, t, h); }, law, grid,
      quad, threads);
}

inline double energy3d(const Deformation3D& def, const PrestrainField& pre,
                       const ElasticLaw& law, const Grid2& grid,
                       const ThicknessQuadrature& quad, int threads = 1) {
  return energy3d_report(def, pre, law, grid, quad, threads).value;
}

struct SweepRow {
  double h = 0;
  double energy = 0;
  double error = 0;  // |energy - target|
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double target = 0;
  double fitted_rate = 0;
  bool rate_applicable = false;
  bool monotone_tail = false;
  double final_rel_error = 0;
};

inline SweepResult h_sweep(const std::function<double(double)>& energy_of_h,
                           const std::vector<double>& h_list, double target) {
  if (h_list.size() < 3) throw Error("h_sweep: need at least 3 thickness values");
  for (std::size_t i = 0; i + 1 < h_list.size(); ++i)
    if (!(h_list[i] > h_list[i + 1])) throw Error("h_sweep: h_list must decrease");
  SweepResult out;
  out.target = target;
  const double floor = 1e-14 * (1.0 + std::abs(target));
  for (double h : h_list) {
    SweepRow row;
    row.h = h;
    row.energy = energy_of_h(h);
    row.error = std::abs(row.energy - target);
    out.rows.push_back(row);
  }
  // Least-squares error exponent over log h.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : out.rows) {
    if (r.error <= floor) continue;
    const double lx = std::log(r.h), ly = std::log(r.error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 2 && std::abs(m * sxx - sx * sx) > 1e-12) {
    out.fitted_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.rate_applicable = true;
  }
  const std::size_t n = out.rows.size();
  const std::size_t tail = std::min<std::size_t>(3, n);
  out.monotone_tail = true;
  for (std::size_t i = n - tail; i + 1 < n; ++i)
    if (out.rows[i + 1].error > out.rows[i].error * (1 + 1e-9) + floor)
      out.monotone_tail = false;
  out.final_rel_error = out.rows.back().error / std::max(1e-300, std::abs(target));
  return out;
}

}  // namespace platelim
