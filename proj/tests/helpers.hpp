#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pairab/dataset.hpp"
#include "pairab/rng.hpp"
#include "pairab/sim.hpp"
#include "pairab/varcomp.hpp"

namespace pairab::test {

inline UnitRecord rec(std::string id, std::optional<double> y1, int x1,
                      std::optional<double> y2, int x2) {
  UnitRecord r;
  r.unit_id = std::move(id);
  r.y1 = y1;
  r.x1 = x1;
  r.y2 = y2;
  r.x2 = x2;
  return r;
}

// Fully paired dataset from plain vectors.
inline PairedDataset paired_ds(const std::vector<double>& y1, const std::vector<int>& x1,
                               const std::vector<double>& y2, const std::vector<int>& x2) {
  std::vector<UnitRecord> rs;
  for (std::size_t i = 0; i < y1.size(); ++i)
    rs.push_back(rec("u" + std::to_string(i), y1[i], x1[i], y2[i], x2[i]));
  return validate_dataset(std::move(rs));
}

// Random instance under the estimation model, with random missingness; no
// exact balance guarantees. Sizes stay small, for oracle comparisons.
inline PairedDataset random_instance(Index n, const VarianceComponents& vc,
                                     double missing_rate, std::uint64_t seed,
                                     double beta1 = 1.0, double beta2 = -0.5,
                                     double alpha1 = 0.3, double alpha2 = -0.2) {
  rng::Stream s(seed);
  std::vector<UnitRecord> rs;
  const double tau = std::sqrt(vc.tau2);
  const double sd1 = std::sqrt(vc.sigma1_2);
  const double sd2 = std::sqrt(vc.sigma2_2);
  for (Index i = 0; i < n; ++i) {
    const double u = tau * s.normal();
    const int x1 = s.uniform() < 0.5 ? 1 : -1;
    const int x2 = s.uniform() < 0.5 ? 1 : -1;
    const double y1 = u + alpha1 + x1 * beta1 + sd1 * s.normal();
    const double y2 = u + alpha2 + x2 * beta2 + sd2 * s.normal();
    const bool keep1 = s.uniform() >= missing_rate;
    const bool keep2 = s.uniform() >= missing_rate;
    rs.push_back(rec("u" + std::to_string(i),
                     keep1 ? std::optional<double>(y1) : std::nullopt, x1,
                     keep2 ? std::optional<double>(y2) : std::nullopt, x2));
  }
  return validate_dataset(std::move(rs));
}

// Exactly orthogonal, fully paired instance (four equal design groups).
inline PairedDataset orthogonal_instance(Index n, const VarianceComponents& vc,
                                         std::uint64_t seed, double beta1 = 1.0,
                                         double beta2 = -0.5, double alpha1 = 0.3,
                                         double alpha2 = -0.2) {
  sim::Designs d = sim::generate_designs(n, seed);
  rng::Stream s(seed ^ 0x5bd1e995u);
  const double tau = std::sqrt(vc.tau2);
  const double sd1 = std::sqrt(vc.sigma1_2);
  const double sd2 = std::sqrt(vc.sigma2_2);
  std::vector<UnitRecord> rs;
  for (Index i = 0; i < n; ++i) {
    const double u = tau * s.normal();
    const double y1 = u + alpha1 + d.x1[i] * beta1 + sd1 * s.normal();
    const double y2 = u + alpha2 + d.x2[i] * beta2 + sd2 * s.normal();
    rs.push_back(rec(std::to_string(i), y1, static_cast<int>(d.x1[i]), y2,
                     static_cast<int>(d.x2[i])));
  }
  return validate_dataset(std::move(rs));
}

inline VarianceComponents vc_of(double tau2, double s1, double s2) {
  return known_components(tau2, s1, s2);
}

// Dense least-squares oracle: coefficients of y ~ columns of X.
inline Eigen::VectorXd least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  return X.colPivHouseholderQr().solve(y);
}

inline bool same_array(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  return a.size() == b.size() && (a == b).all();
}

inline double sample_mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

inline double sample_covariance(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = sample_mean(a), mb = sample_mean(b);
  double ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - ma) * (b[i] - mb);
  return ss / static_cast<double>(a.size() - 1);
}

}  // namespace pairab::test
