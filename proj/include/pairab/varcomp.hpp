#pragma once

#include <array>
#include <optional>

#include "pairab/dataset.hpp"

namespace pairab {

// The eight design-cell sample variances feeding the moment estimators.
// Per-experiment cells pool all available outcomes for that experiment; the
// z = y1 - y2 cells use the both-outcomes panel only, split by the sign pair
// (x1, x2).
struct GroupVariances {
  double s1_plus = 0, s1_minus = 0;  // experiment 1 outcomes by arm
  double s2_plus = 0, s2_minus = 0;  // experiment 2 outcomes by arm
  double s_pp = 0, s_pm = 0, s_mp = 0, s_mm = 0;  // z by (sign x1, sign x2)
  std::array<Index, 8> cell_counts{};             // same order as above
};

// Pooled second moments: m1, m2 estimate sigma_k^2 + tau^2, m3 estimates
// sigma_1^2 + sigma_2^2.
struct Moments {
  double m1 = 0, m2 = 0, m3 = 0;
};

// Floor applied to the noise variances so downstream weights stay finite
// when the moment solve degenerates.
inline constexpr double kSigmaFloor = 1e-12;

// (tau^2, sigma_1^2, sigma_2^2) after nonnegativity projection. `projected`
// records, per component, whether the raw moment solution was clipped.
struct VarianceComponents {
  double tau2 = 0;
  double sigma1_2 = kSigmaFloor;
  double sigma2_2 = kSigmaFloor;
  std::array<bool, 3> projected{false, false, false};

  bool any_projected() const { return projected[0] || projected[1] || projected[2]; }
};

// Constructs components from known values, applying the same floors as the
// moment route (flags stay false).
VarianceComponents known_components(double tau2, double sigma1_2, double sigma2_2);

// Unbiased (n-1 denominator) sample variances per cell. Throws
// InsufficientCell naming the first cell with fewer than two observations.
GroupVariances group_sample_variances(const PairedDataset& ds);

// Same computation without the minimum-count requirement; cells with fewer
// than two observations hold a quiet NaN. Counts are always filled.
GroupVariances group_sample_variances_unchecked(const PairedDataset& ds);

Moments pooled_moments(const GroupVariances& gv);

// Inverts the pooled moments: raw solution
//   tau2     = (m1 + m2 - m3) / 2
//   sigma1^2 = (m1 - m2 + m3) / 2
//   sigma2^2 = (-m1 + m2 + m3) / 2
// then projects tau2 to 0 and sigma_k^2 to the floor where negative.
VarianceComponents solve_components(double m1, double m2, double m3);
inline VarianceComponents solve_components(const Moments& m) {
  return solve_components(m.m1, m.m2, m.m3);
}

// Steps 1-4 in one call.
VarianceComponents estimate_components(const PairedDataset& ds);

}  // namespace pairab
