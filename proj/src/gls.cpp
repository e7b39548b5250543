#include "pairab/gls.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "pairab/estimators.hpp"

namespace pairab {

GlsConstants gls_constants(const VarianceComponents& vc) {
  const double t = vc.tau2, s1 = vc.sigma1_2, s2 = vc.sigma2_2;
  const double delta = t * (s1 + s2) + s1 * s2;
  GlsConstants k;
  k.a = (s2 + t) / delta;
  k.b = 1.0 / (s1 + t);
  k.c = (s1 + t) / delta;
  k.d = 1.0 / (s2 + t);
  k.e = -t / delta;
  return k;
}

namespace {

// Solves the 4x4 normal equations; the factorization doubles as the
// singularity check for confounded designs.
GlsSolution solve_normal_equations(const Eigen::Matrix4d& M, const Eigen::Vector4d& rhs,
                                   const GlsConstants& constants) {
  Eigen::LDLT<Eigen::Matrix4d> ldlt(M);
  const Eigen::Vector4d diag = ldlt.vectorD();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(dmax > 0) ||
      diag.minCoeff() <= 1e-12 * dmax)
    throw Error(Errc::SingularNormalEquations,
                "normal equations are singular; a design level is confounded or "
                "constant on its support");

  GlsSolution sol;
  sol.theta = ldlt.solve(rhs);
  sol.covariance = ldlt.solve(Eigen::Matrix4d::Identity());
  // Symmetrize; the solve introduces roundoff asymmetry.
  sol.covariance = ((sol.covariance + sol.covariance.transpose()) / 2.0).eval();
  sol.constants = constants;
  return sol;
}

}  // namespace

GlsSolution gls_partial(const PairedDataset& ds, const VarianceComponents& vc) {
  const SuffStats st = sufficient_stats(ds);
  if (st.n0 + st.n1 == 0 || st.n0 + st.n2 == 0)
    throw Error(Errc::NoData, "each experiment needs at least one outcome");

  const GlsConstants k = gls_constants(vc);
  const double n0 = static_cast<double>(st.n0);
  const double n1 = static_cast<double>(st.n1);
  const double n2 = static_cast<double>(st.n2);

  Eigen::Matrix4d M;
  const double m00 = k.a * n0 + k.b * n1;
  const double m11 = k.c * n0 + k.d * n2;
  const double m02 = k.a * st.s0_x1 + k.b * st.s1_x1;
  const double m13 = k.c * st.s0_x2 + k.d * st.s2_x2;
  M << m00, k.e * n0, m02, k.e * st.s0_x2,
       k.e * n0, m11, k.e * st.s0_x1, m13,
       m02, k.e * st.s0_x1, m00, k.e * st.s0_x1x2,
       k.e * st.s0_x2, m13, k.e * st.s0_x1x2, m11;

  Eigen::Vector4d rhs;
  rhs << k.a * st.s0_y1 + k.b * st.s1_y1 + k.e * st.s0_y2,
         k.e * st.s0_y1 + k.c * st.s0_y2 + k.d * st.s2_y2,
         k.a * st.s0_x1y1 + k.b * st.s1_x1y1 + k.e * (st.s0_x1y1 - st.s0_x1z),
         k.e * (st.s0_x2y2 + st.s0_x2z) + k.c * st.s0_x2y2 + k.d * st.s2_x2y2;

  return solve_normal_equations(M, rhs, k);
}

GlsSolution brute_force_gls(const PairedDataset& ds, const VarianceComponents& vc) {
  const PanelCounts c = ds.counts();
  const Index total = 2 * c.n0 + c.n1 + c.n2;
  if (total > kBruteForceGuard)
    throw Error(Errc::SizeGuardExceeded,
                std::to_string(total) + " outcomes exceed the dense-oracle guard of " +
                    std::to_string(kBruteForceGuard));
  if (c.n0 + c.n1 == 0 || c.n0 + c.n2 == 0)
    throw Error(Errc::NoData, "each experiment needs at least one outcome");

  // Stacked layout: experiment-1 responses (paired panel, then first-only),
  // experiment-2 responses (paired panel, then second-only).
  Eigen::VectorXd y(total);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(total, 4);
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(total, total);

  const double v1 = vc.sigma1_2 + vc.tau2;
  const double v2 = vc.sigma2_2 + vc.tau2;

  Index row = 0;
  for (Index i : ds.p0()) {
    y[row] = ds.y1()[i];
    X(row, 0) = 1.0;
    X(row, 2) = ds.x1()[i];
    V(row, row) = v1;
    ++row;
  }
  for (Index i : ds.p1()) {
    y[row] = ds.y1()[i];
    X(row, 0) = 1.0;
    X(row, 2) = ds.x1()[i];
    V(row, row) = v1;
    ++row;
  }
  Index pair_offset = 0;
  for (Index i : ds.p0()) {
    y[row] = ds.y2()[i];
    X(row, 1) = 1.0;
    X(row, 3) = ds.x2()[i];
    V(row, row) = v2;
    V(row, pair_offset) = vc.tau2;
    V(pair_offset, row) = vc.tau2;
    ++row;
    ++pair_offset;
  }
  for (Index i : ds.p2()) {
    y[row] = ds.y2()[i];
    X(row, 1) = 1.0;
    X(row, 3) = ds.x2()[i];
    V(row, row) = v2;
    ++row;
  }

  Eigen::LDLT<Eigen::MatrixXd> vldlt(V);
  if (vldlt.info() != Eigen::Success)
    throw Error(Errc::SingularNormalEquations, "response covariance is singular");
  const Eigen::MatrixXd viX = vldlt.solve(X);
  const Eigen::Matrix4d M = X.transpose() * viX;
  const Eigen::Vector4d rhs = viX.transpose() * y;

  return solve_normal_equations(M, rhs, gls_constants(vc));
}

std::pair<double, double> gls_asymptotic_variance(const VarianceComponents& vc,
                                                  double r0, double r1, double r2) {
  const GlsConstants k = gls_constants(vc);
  return {1.0 / (k.a * r0 + k.b * r1), 1.0 / (k.c * r0 + k.d * r2)};
}

}  // namespace pairab
