#pragma once

// Prestrain fields A^h = Abar(x') + h B(x', t) and sampled Hessian fields.

#include <functional>
#include <utility>
#include <vector>

#include "platelim/elastic.hpp"
#include "platelim/quadrature.hpp"

namespace platelim {

// Matrix-valued thickness profile: polynomial in t or piecewise-constant layers.
struct TProfile {
  enum class Kind { Poly, Layers };
  Kind kind = Kind::Poly;
  std::vector<SymMat3> coeffs;  // poly: sum_k t^k coeffs[k]
  std::vector<double> breaks;   // layers: ascending, first -1/2, last 1/2
  std::vector<SymMat3> values;  // layers: one value per interval

  static TProfile poly(std::vector<SymMat3> c) {
    TProfile p;
    p.kind = Kind::Poly;
    p.coeffs = std::move(c);
    return p;
  }
  static TProfile constant(const SymMat3& b0) { return poly({b0}); }
  static TProfile linear(const SymMat3& b1) { return poly({SymMat3(), b1}); }
  static TProfile layers(std::vector<double> breaks, std::vector<SymMat3> values) {
    if (breaks.size() != values.size() + 1)
      throw Error("TProfile::layers: breaks must bracket values");
    TProfile p;
    p.kind = Kind::Layers;
    p.breaks = std::move(breaks);
    p.values = std::move(values);
    return p;
  }

  SymMat3 eval(double t) const {
    if (kind == Kind::Poly) {
      SymMat3 acc;
      double tk = 1.0;
      for (const auto& c : coeffs) {
        acc = acc + tk * c;
        tk *= t;
      }
      return acc;
    }
    for (std::size_t l = 0; l + 1 < breaks.size(); ++l)
      if (t <= breaks[l + 1] || l + 2 == breaks.size()) return values[l];
    return values.back();
  }

  // Quadrature adapted to the profile: plain Gauss for polynomials (exact for
  // degree <= 2n-1), subdivided per layer for laminates.
  ThicknessQuadrature quadrature(int n) const {
    if (kind == Kind::Poly) return ThicknessQuadrature::gauss(n);
    return ThicknessQuadrature::gauss_layered(breaks, n);
  }
};

struct PrestrainField {
  std::function<SymMat3(const Vec2&)> abar;
  std::function<SymMat3(const Vec2&, double)> b;

  static PrestrainField uniform(const SymMat3& abar0, TProfile profile) {
    PrestrainField p;
    p.abar = [abar0](const Vec2&) { return abar0; };
    p.b = [pr = std::move(profile)](const Vec2&, double t) { return pr.eval(t); };
    return p;
  }

  static PrestrainField make(std::function<SymMat3(const Vec2&)> abar,
                             std::function<SymMat3(const Vec2&, double)> b) {
    PrestrainField p;
    p.abar = std::move(abar);
    p.b = std::move(b);
    return p;
  }

  Mat3 a_h(const Vec2& x, double t, double h) const {
    return abar(x).mat() + h * b(x, t).mat();
  }
};

using Q3Field = std::function<QuadForm3(const Vec2&, double)>;

inline Q3Field q3_constant(const QuadForm3& q) {
  return [q](const Vec2&, double) { return q; };
}

inline Q3Field q3_isotropic(double mu, double lambda) {
  return q3_constant(QuadForm3::isotropic(mu, lambda));
}

// Moduli varying through the thickness (polynomially, in the suites).
inline Q3Field q3_isotropic_profile(std::function<double(double)> mu,
                                    std::function<double(double)> lambda) {
  return [mu = std::move(mu), lambda = std::move(lambda)](const Vec2&, double t) {
    return QuadForm3::isotropic(mu(t), lambda(t));
  };
}

inline Q3Field q3_from_law(const ElasticLaw& law, double step = 1e-4) {
  if (law.exact_hessian)
    return [h = law.exact_hessian](const Vec2& x, double t) { return h(x, t); };
  return [law, step](const Vec2& x, double t) {
    return hessian_at_identity(law, x, t, step);
  };
}

}  // namespace platelim
