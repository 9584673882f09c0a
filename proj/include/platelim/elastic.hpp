#pragma once

// Elastic energy densities W(x', t, F): frame indifferent, zero exactly on
// SO(3), and sandwiched by dist^2(F, SO(3)). Built-in laws are quadratic in
// the stretch U - Id with U = sqrt(F^T F), which makes their Hessian at the
// identity available in closed form.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "platelim/quadform.hpp"

namespace platelim {

struct ElasticLaw {
  std::string family;
  std::vector<double> params;
  // Density: (midplane point, thickness coordinate t in (-1/2,1/2), F).
  std::function<double(const Vec2&, double, const Mat3&)> w;
  // Closed-form Hessian at the identity, when the family provides one.
  std::function<QuadForm3(const Vec2&, double)> exact_hessian;
};

namespace detail {

// ||U - Id||^2 and tr(U - Id) from the eigenvalues of F^T F.
inline void stretch_invariants(const Mat3& f, double& norm2, double& tr) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(Mat3(f.transpose() * f));
  norm2 = 0;
  tr = 0;
  for (int i = 0; i < 3; ++i) {
    const double s = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
    norm2 += (s - 1) * (s - 1);
    tr += s - 1;
  }
}

}  // namespace detail

// W(F) = ||sqrt(F^T F) - Id||^2. Flags deformations with det F <= 0.
inline ElasticLaw builtin_dist_law() {
  ElasticLaw law;
  law.family = "dist";
  law.w = [](const Vec2&, double, const Mat3& f) {
    if (f.determinant() <= 0)
      throw SingularDeformation("dist law: det F <= 0");
    double n2, tr;
    detail::stretch_invariants(f, n2, tr);
    return n2;
  };
  law.exact_hessian = [](const Vec2&, double) { return QuadForm3::isotropic(1.0, 0.0); };
  return law;
}

// W(F) = mu ||U - Id||^2 + (lambda/2) tr^2(U - Id), U = sqrt(F^T F).
// Hessian at the identity: Q3(F) = 2 mu |sym F|^2 + lambda tr^2 F.
inline ElasticLaw builtin_isotropic_quadratic(double mu, double lambda) {
  if (!(mu > 0) || !(3 * lambda + 2 * mu > 0))
    throw BadModuli("isotropic law: need mu > 0 and 3 lambda + 2 mu > 0");
  ElasticLaw law;
  law.family = "isotropic";
  law.params = {mu, lambda};
  law.w = [mu, lambda](const Vec2&, double, const Mat3& f) {
    double n2, tr;
    detail::stretch_invariants(f, n2, tr);
    return mu * n2 + 0.5 * lambda * tr * tr;
  };
  law.exact_hessian = [mu, lambda](const Vec2&, double) {
    return QuadForm3::isotropic(mu, lambda);
  };
  return law;
}

// Diagnostic family violating the moduli constraints; its Hessian has a
// negative eigenvalue 2 mu + 3 lambda < 0. Used to exercise error paths.
inline ElasticLaw unstable_quadratic(double mu, double lambda) {
  ElasticLaw law;
  law.family = "unstable-quadratic";
  law.params = {mu, lambda};
  law.w = [mu, lambda](const Vec2&, double, const Mat3& f) {
    double n2, tr;
    detail::stretch_invariants(f, n2, tr);
    return mu * n2 + 0.5 * lambda * tr * tr;
  };
  return law;
}

// Second differences of W at the identity over the orthonormal symmetric
// basis, then explicit symmetrization.
inline QuadForm3 hessian_at_identity(const ElasticLaw& law, const Vec2& x, double t,
                                     double step = 1e-4, double psd_tol = 1e-6) {
  if (!(step > 0) || step * step < 1e3 * std::numeric_limits<double>::epsilon())
    throw StepTooSmall("hessian_at_identity: difference quotients would be pure noise");
  const Mat3 id = Mat3::Identity();
  const auto wEval = [&](const Mat3& f) { return law.w(x, t, f); };
  const double w0 = wEval(id);
  Mat6 L;
  for (int i = 0; i < 6; ++i) {
    const Mat3 ei = sym3_basis(i).mat();
    L(i, i) = (wEval(id + step * ei) - 2 * w0 + wEval(id - step * ei)) / (step * step);
    for (int j = i + 1; j < 6; ++j) {
      const Mat3 ej = sym3_basis(j).mat();
      const double q = (wEval(id + step * (ei + ej)) - wEval(id + step * (ei - ej)) -
                        wEval(id + step * (ej - ei)) + wEval(id - step * (ei + ej))) /
                       (4 * step * step);
      L(i, j) = q;
      L(j, i) = q;
    }
  }
  if (!L.allFinite()) throw StepTooSmall("hessian_at_identity: non-finite quotients");
  L = 0.5 * (L + L.transpose()).eval();
  QuadForm3 q3(L);
  const double scale = 1.0 + L.cwiseAbs().maxCoeff();
  if (q3.min_eigenvalue() < -psd_tol * scale)
    throw HessianNotPSD("hessian_at_identity: eigenvalue " +
                        std::to_string(q3.min_eigenvalue()) + " below -tolerance");
  return q3;
}

struct TaylorRatioReport {
  bool applicable = true;  // false when (1/2) Q3(F) vanishes
  std::vector<double> h;
  std::vector<double> ratio;  // W(Id + h F) / (h^2 (1/2) Q3(F))
  double final_deviation = 0; // |ratio.back() - 1|
};

inline TaylorRatioReport taylor_ratio_check(const ElasticLaw& law, const Vec2& x, double t,
                                            const Mat3& f, const std::vector<double>& h_list) {
  TaylorRatioReport rep;
  const QuadForm3 q3 = law.exact_hessian ? law.exact_hessian(x, t)
                                         : hessian_at_identity(law, x, t);
  const double denom = 0.5 * q3(f);
  if (denom <= 1e-12 * (1.0 + f.squaredNorm())) {
    rep.applicable = false;
    return rep;
  }
  for (double h : h_list) {
    rep.h.push_back(h);
    rep.ratio.push_back(law.w(x, t, Mat3(Mat3::Identity() + h * f)) / (h * h * denom));
  }
  rep.final_deviation = std::abs(rep.ratio.back() - 1.0);
  return rep;
}

}  // namespace platelim
