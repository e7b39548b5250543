#include "pairab/varcomp.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pairab {

namespace {

constexpr const char* kCellNames[8] = {"S2_1+", "S2_1-", "S2_2+", "S2_2-",
                                       "S2_++", "S2_+-", "S2_-+", "S2_--"};

// Two-pass sample variance with n-1 denominator over an index subset.
template <class Select, class Value>
double cell_variance(const std::vector<Index>& panel, Select in_cell, Value value,
                     Index& count) {
  double sum = 0;
  Index m = 0;
  for (Index i : panel) {
    if (!in_cell(i)) continue;
    sum += value(i);
    ++m;
  }
  count = m;
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mean = sum / static_cast<double>(m);
  double ss = 0;
  for (Index i : panel) {
    if (!in_cell(i)) continue;
    const double d = value(i) - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(m - 1);
}

GroupVariances compute_cells(const PairedDataset& ds) {
  GroupVariances gv;
  const auto& x1 = ds.x1();
  const auto& x2 = ds.x2();
  const auto& y1 = ds.y1();
  const auto& y2 = ds.y2();

  // Experiment-wise cells over all available outcomes (both-outcomes panel
  // plus the experiment's own single panel).
  std::vector<Index> avail1 = ds.p0();
  avail1.insert(avail1.end(), ds.p1().begin(), ds.p1().end());
  std::vector<Index> avail2 = ds.p0();
  avail2.insert(avail2.end(), ds.p2().begin(), ds.p2().end());

  gv.s1_plus = cell_variance(
      avail1, [&](Index i) { return x1[i] > 0; }, [&](Index i) { return y1[i]; },
      gv.cell_counts[0]);
  gv.s1_minus = cell_variance(
      avail1, [&](Index i) { return x1[i] < 0; }, [&](Index i) { return y1[i]; },
      gv.cell_counts[1]);
  gv.s2_plus = cell_variance(
      avail2, [&](Index i) { return x2[i] > 0; }, [&](Index i) { return y2[i]; },
      gv.cell_counts[2]);
  gv.s2_minus = cell_variance(
      avail2, [&](Index i) { return x2[i] < 0; }, [&](Index i) { return y2[i]; },
      gv.cell_counts[3]);

  const auto z = [&](Index i) { return y1[i] - y2[i]; };
  gv.s_pp = cell_variance(
      ds.p0(), [&](Index i) { return x1[i] > 0 && x2[i] > 0; }, z, gv.cell_counts[4]);
  gv.s_pm = cell_variance(
      ds.p0(), [&](Index i) { return x1[i] > 0 && x2[i] < 0; }, z, gv.cell_counts[5]);
  gv.s_mp = cell_variance(
      ds.p0(), [&](Index i) { return x1[i] < 0 && x2[i] > 0; }, z, gv.cell_counts[6]);
  gv.s_mm = cell_variance(
      ds.p0(), [&](Index i) { return x1[i] < 0 && x2[i] < 0; }, z, gv.cell_counts[7]);
  return gv;
}

}  // namespace

GroupVariances group_sample_variances_unchecked(const PairedDataset& ds) {
  return compute_cells(ds);
}

GroupVariances group_sample_variances(const PairedDataset& ds) {
  GroupVariances gv = compute_cells(ds);
  for (int c = 0; c < 8; ++c) {
    if (gv.cell_counts[static_cast<std::size_t>(c)] < 2)
      throw Error(Errc::InsufficientCell,
                  std::string(kCellNames[c]) + " has " +
                      std::to_string(gv.cell_counts[static_cast<std::size_t>(c)]) +
                      " observation(s), need at least 2; consider analyzing each "
                      "experiment separately (method=single)");
  }
  return gv;
}

Moments pooled_moments(const GroupVariances& gv) {
  Moments m;
  m.m1 = (gv.s1_plus + gv.s1_minus) / 2.0;
  m.m2 = (gv.s2_plus + gv.s2_minus) / 2.0;
  m.m3 = (gv.s_pp + gv.s_pm + gv.s_mp + gv.s_mm) / 4.0;
  return m;
}

VarianceComponents solve_components(double m1, double m2, double m3) {
  VarianceComponents vc;
  const double tau2 = (m1 + m2 - m3) / 2.0;
  const double sigma1 = (m1 - m2 + m3) / 2.0;
  const double sigma2 = (-m1 + m2 + m3) / 2.0;
  vc.tau2 = tau2 < 0 ? 0.0 : tau2;
  vc.sigma1_2 = sigma1 < kSigmaFloor ? kSigmaFloor : sigma1;
  vc.sigma2_2 = sigma2 < kSigmaFloor ? kSigmaFloor : sigma2;
  vc.projected = {tau2 < 0, sigma1 < kSigmaFloor, sigma2 < kSigmaFloor};
  return vc;
}

VarianceComponents known_components(double tau2, double sigma1_2, double sigma2_2) {
  if (!(tau2 >= 0) || !(sigma1_2 >= 0) || !(sigma2_2 >= 0))
    throw Error(Errc::InvalidConfig, "variance components must be nonnegative");
  VarianceComponents vc;
  vc.tau2 = tau2;
  vc.sigma1_2 = std::max(sigma1_2, kSigmaFloor);
  vc.sigma2_2 = std::max(sigma2_2, kSigmaFloor);
  return vc;
}

VarianceComponents estimate_components(const PairedDataset& ds) {
  return solve_components(pooled_moments(group_sample_variances(ds)));
}

}  // namespace pairab
