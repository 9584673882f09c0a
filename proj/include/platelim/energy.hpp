#pragma once

// The limiting plate energy, evaluated two ways:
//  - gamma_energy: the closed form (1/2) int <T2*(H - n*), H - n*> + (1/2) int R
//    over the moment operators of effective.hpp,
//  - gamma_energy_direct: per midplane point, the exact minimization of
//    int Q3(Abar^-1 [s + t H - Abar B + d x e3] Abar^-1) dt over the symmetric
//    in-plane offset s and the out-of-plane vector d at every thickness node,
//    via one dense SPD solve.
// The two share quadrature nodes, so their agreement isolates the moment
// algebra from discretization error.

#include "platelim/effective.hpp"
#include "platelim/surface.hpp"

namespace platelim {

struct DirectPointResult {
  double value = 0;
  SymMat2 s_opt;
  std::vector<Vec3> d_opt;
};

inline DirectPointResult direct_relaxed_energy_point(const SymMat3& abar,
                                                     std::span<const SymMat3> b_samples,
                                                     std::span<const QuadForm3> q3,
                                                     const SymMat2& h,
                                                     const ThicknessQuadrature& quad) {
  const int n = quad.size();
  if (static_cast<int>(b_samples.size()) != n || static_cast<int>(q3.size()) != n)
    throw Error("direct_relaxed_energy_point: sample/node count mismatch");
  Eigen::SelfAdjointEigenSolver<Mat3> es(abar.mat());
  if (es.eigenvalues().minCoeff() <= 0)
    throw SingularAbar("direct_relaxed_energy_point: Abar not SPD");
  const Mat3 ainv = abar.mat().inverse();

  SymMat3 S[3], K[3];
  for (int k = 0; k < 3; ++k)
    S[k] = SymMat3(Mat3(ainv * SymMat3::embed(sym2_basis(k)).mat() * ainv));
  for (int k = 0; k < 3; ++k)
    K[k] = SymMat3(Mat3(ainv * sym_outer_e3(Vec3::Unit(k)).mat() * ainv));

  std::vector<SymMat3> c(n);
  for (int i = 0; i < n; ++i) {
    const Mat3 raw = quad.nodes[i] * SymMat3::embed(h).mat() - abar.mat() * b_samples[i].mat();
    c[i] = SymMat3(Mat3(ainv * raw * ainv));  // SymMat3 ctor symmetrizes
  }

  const int dim = 3 + 3 * n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  double c0 = 0;
  for (int i = 0; i < n; ++i) {
    const double w = quad.weights[i];
    c0 += w * q3[i](c[i]);
    for (int k = 0; k < 3; ++k) {
      rhs[k] += w * q3[i].bilinear(c[i], S[k]);
      for (int l = k; l < 3; ++l) A(k, l) += w * q3[i].bilinear(S[k], S[l]);
      for (int l = 0; l < 3; ++l)
        A(k, 3 + 3 * i + l) += w * q3[i].bilinear(S[k], K[l]);
    }
    for (int k = 0; k < 3; ++k) {
      rhs[3 + 3 * i + k] += w * q3[i].bilinear(c[i], K[k]);
      for (int l = k; l < 3; ++l)
        A(3 + 3 * i + k, 3 + 3 * i + l) += w * q3[i].bilinear(K[k], K[l]);
    }
  }
  A = A.selfadjointView<Eigen::Upper>();

  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw SingularStationaritySystem("direct_relaxed_energy_point: degenerate system");
  const Eigen::VectorXd x = ldlt.solve(-rhs);

  DirectPointResult out;
  out.value = c0 + rhs.dot(x);  // c0 + 2 b.x + x.A.x at the minimizer = c0 + b.x
  out.s_opt = SymMat2::from_vec(Vec3(x[0], x[1], x[2]));
  out.d_opt.resize(n);
  for (int i = 0; i < n; ++i)
    out.d_opt[i] = Vec3(x[3 + 3 * i], x[4 + 3 * i], x[5 + 3 * i]);
  return out;
}

struct GammaEnergyReport {
  double total = 0;
  std::vector<double> density;  // per midplane node, before trapezoid weights
  double isometry_max = 0;
};

namespace detail {

inline void gate_isometry(const Midsurface& s, const PrestrainField& prestrain,
                          double tol, GammaEnergyReport& rep) {
  const auto g2 = [&](const Vec2& x) {
    const Mat3 a = prestrain.abar(x).mat();
    return SymMat2(Mat2((a * a).topLeftCorner<2, 2>()));
  };
  const IsometryReport iso = isometry_residual(s, g2);
  rep.isometry_max = iso.max;
  if (iso.max > tol)
    throw InfiniteEnergy("gamma energy: isometry residual " + std::to_string(iso.max) +
                         " exceeds gate " + std::to_string(tol));
}

}  // namespace detail

inline GammaEnergyReport gamma_energy(const Midsurface& s, const PlateModel& model,
                                      const PrestrainField& prestrain,
                                      double iso_tol = 1e-6) {
  if (model.grid.count() != s.grid.count())
    throw Error("gamma_energy: grid mismatch between surface and model");
  GammaEnergyReport rep;
  detail::gate_isometry(s, prestrain, iso_tol, rep);
  rep.density.resize(s.grid.count());
  std::vector<double> terms(s.grid.count());
  for (int j = 0; j < s.grid.ny; ++j)
    for (int i = 0; i < s.grid.nx; ++i) {
      const int n = s.grid.idx(i, j);
      const PlatePoint& p = model.pts[n];
      const SymMat2 dev = s.second_form[n] - p.n_star;
      rep.density[n] = 0.5 * (p.t2_star(dev) + p.residue);
      terms[n] = s.grid.trapezoid_weight(i, j) * rep.density[n];
    }
  rep.total = pairwise_sum(std::move(terms));
  return rep;
}

inline GammaEnergyReport gamma_energy_direct(const Midsurface& s,
                                             const PrestrainField& prestrain,
                                             const Q3Field& q3field,
                                             const ThicknessQuadrature& quad,
                                             double iso_tol = 1e-6, int threads = 1) {
  GammaEnergyReport rep;
  detail::gate_isometry(s, prestrain, iso_tol, rep);
  rep.density.resize(s.grid.count());
  std::vector<double> terms(s.grid.count());
  parallel_for(s.grid.count(), threads, [&](int n) {
    const int i = n % s.grid.nx, j = n / s.grid.nx;
    const Vec2 x = s.grid.point(i, j);
    std::vector<SymMat3> b(quad.size());
    std::vector<QuadForm3> q3(quad.size());
    for (int k = 0; k < quad.size(); ++k) {
      b[k] = prestrain.b(x, quad.nodes[k]);
      q3[k] = q3field(x, quad.nodes[k]);
    }
    const DirectPointResult r =
        direct_relaxed_energy_point(prestrain.abar(x), b, q3, s.second_form[n], quad);
    rep.density[n] = 0.5 * r.value;
    terms[n] = s.grid.trapezoid_weight(i, j) * rep.density[n];
  });
  rep.total = pairwise_sum(std::move(terms));
  return rep;
}

}  // namespace platelim
