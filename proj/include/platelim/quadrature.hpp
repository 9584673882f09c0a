#pragma once

// Gauss-Legendre quadrature on the thickness interval (-1/2, 1/2), with a
// layered variant for piecewise-constant laminates.

#include <cmath>

#include "platelim/core.hpp"

namespace platelim {

struct ThicknessQuadrature {
  std::vector<double> nodes;    // in (-1/2, 1/2)
  std::vector<double> weights;  // sum to 1

  int size() const { return static_cast<int>(nodes.size()); }

  static ThicknessQuadrature gauss(int n) {
    if (n < 1) throw Error("ThicknessQuadrature: need at least one node");
    ThicknessQuadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    // Newton iteration on Legendre polynomials, reference interval [-1, 1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      q.nodes[i] = -x / 2.0;
      q.nodes[n - 1 - i] = x / 2.0;
      q.weights[i] = w / 2.0;
      q.weights[n - 1 - i] = w / 2.0;
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    return q;
  }

  // Per-layer Gauss rule over breakpoints spanning [-1/2, 1/2].
  static ThicknessQuadrature gauss_layered(const std::vector<double>& breaks,
                                           int n_per_layer) {
    if (breaks.size() < 2) throw Error("gauss_layered: need at least one layer");
    ThicknessQuadrature base = gauss(n_per_layer);
    ThicknessQuadrature q;
    for (std::size_t l = 0; l + 1 < breaks.size(); ++l) {
      const double a = breaks[l], b = breaks[l + 1];
      if (b <= a) throw Error("gauss_layered: breakpoints must increase");
      for (int i = 0; i < n_per_layer; ++i) {
        // Map from (-1/2, 1/2) to (a, b).
        q.nodes.push_back(0.5 * (a + b) + (b - a) * base.nodes[i]);
        q.weights.push_back((b - a) * base.weights[i]);
      }
    }
    return q;
  }

  // Sum of w_i t_i^k f-free moment; handy in tests.
  double moment(int k) const {
    double m = 0;
    for (int i = 0; i < size(); ++i) m += weights[i] * std::pow(nodes[i], k);
    return m;
  }
};

}  // namespace platelim
