#pragma once

#include <Eigen/Core>
#include <utility>

#include "pairab/dataset.hpp"
#include "pairab/varcomp.hpp"

namespace pairab {

// Scalars of the per-unit inverse covariance blocks. With
// delta = sigma1^2 sigma2^2 + tau^2 (sigma1^2 + sigma2^2):
//   a = (sigma2^2 + tau^2) / delta   (paired unit, experiment-1 response)
//   b = 1 / (sigma1^2 + tau^2)       (unpaired experiment-1 response)
//   c = (sigma1^2 + tau^2) / delta   (paired unit, experiment-2 response)
//   d = 1 / (sigma2^2 + tau^2)       (unpaired experiment-2 response)
//   e = -tau^2 / delta               (paired-unit cross term)
struct GlsConstants {
  double a = 0, b = 0, c = 0, d = 0, e = 0;
};

GlsConstants gls_constants(const VarianceComponents& vc);

// Weighted least squares fit of (alpha1, alpha2, beta1, beta2).
struct GlsSolution {
  Eigen::Vector4d theta = Eigen::Vector4d::Zero();  // (alpha1, alpha2, beta1, beta2)
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
  GlsConstants constants;

  double alpha(int experiment) const { return theta[experiment - 1]; }
  double beta(int experiment) const { return theta[1 + experiment]; }
  double beta_variance(int experiment) const {
    return covariance(1 + experiment, 1 + experiment);
  }
};

// Exact GLS via the closed-form block algebra: the 4x4 normal equations are
// assembled in one O(n) pass from panel sums (the response covariance is
// inverted per unit, never materialized), then solved by an LDLT
// factorization. Throws SingularNormalEquations for confounded designs.
GlsSolution gls_partial(const PairedDataset& ds, const VarianceComponents& vc);

// Total available outcomes accepted by the dense oracle.
inline constexpr Index kBruteForceGuard = 5000;

// Independent dense route: literally stacks the response vector, the N x 4
// design matrix and the full N x N covariance (tau^2 off-diagonal coupling
// for paired units) and solves the generalized least squares problem with
// generic dense factorizations. Exists to cross-check gls_partial; guarded
// to kBruteForceGuard outcomes.
GlsSolution brute_force_gls(const PairedDataset& ds, const VarianceComponents& vc);

// Limits of n * Var(beta_k) under panel fractions (r0, r1, r2):
//   (1 / (a r0 + b r1), 1 / (c r0 + d r2)).
std::pair<double, double> gls_asymptotic_variance(const VarianceComponents& vc,
                                                  double r0, double r1, double r2);

}  // namespace pairab
