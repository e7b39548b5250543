#pragma once

#include <Eigen/Core>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pairab/dataset.hpp"
#include "pairab/varcomp.hpp"

namespace pairab {

enum class Method { single, paired, coe, gls };

std::string_view method_name(Method m);

struct Estimate {
  double value = 0;
  double variance = 0;
};

// One estimate with its plug-in variance and asymptotic normal CI.
struct EstimateReport {
  int experiment = 1;  // 1 or 2
  Method method = Method::single;
  double estimate = 0;
  double variance = 0;
  double std_error = 0;
  double ci_lower = 0;
  double ci_upper = 0;
  double level = 0.95;
  VarianceComponents components;
  PanelCounts counts;
};

// Theoretical relative efficiencies Var(second)/Var(first) under full
// pairing; values below one favor the second estimator. re_single_coe and
// re_paired_coe never exceed one.
struct EfficiencyReport {
  std::array<double, 2> re_single_paired{};  // index 0 -> experiment 1
  std::array<double, 2> re_single_coe{};
  std::array<double, 2> re_paired_coe{};
};

// Sums over the panels that every estimator is assembled from; one O(n)
// pass, fixed summation order.
struct SuffStats {
  Index n0 = 0, n1 = 0, n2 = 0;
  double s0_x1y1 = 0, s0_x2y2 = 0;  // both-outcomes panel
  double s0_x1z = 0, s0_x2z = 0;    // z = y1 - y2 on the both-outcomes panel
  double s1_x1y1 = 0;               // first-only panel
  double s2_x2y2 = 0;               // second-only panel
  double s0_y1 = 0, s0_y2 = 0, s1_y1 = 0, s2_y2 = 0;
  double s0_x1 = 0, s0_x2 = 0, s1_x1 = 0, s2_x2 = 0, s0_x1x2 = 0;
};

SuffStats sufficient_stats(const PairedDataset& ds);

// Per-experiment least squares on available outcomes:
//   estimate = sum x_k y_k / count,  variance = (tau^2 + sigma_k^2) / count.
Estimate single_estimate(const PairedDataset& ds, int experiment,
                         const VarianceComponents& vc);

struct PairedEstimates {
  double beta1 = 0;
  double beta2 = 0;
  double variance = 0;  // common to both: (sigma1^2 + sigma2^2) / n0
};

// Difference regression on the both-outcomes panel:
//   beta1 = mean of x1 z, beta2 = -mean of x2 z.
PairedEstimates paired_estimate(const PairedDataset& ds, const VarianceComponents& vc);

struct BlueResult {
  double estimate = 0;
  double variance = 0;
  Eigen::VectorXd weights;  // sums to one
};

// Minimum-variance unbiased combination of estimates sharing a common mean:
// weights S^-1 1 / (1' S^-1 1). Throws SingularCovariance when S is not
// positive definite.
BlueResult blue_combine(const Eigen::VectorXd& estimates, const Eigen::MatrixXd& covariance);

// Collaborative estimators for both experiments. Weights are evaluated in
// the tau^2-multiplied form, so tau^2 = 0 degrades exactly to the single
// estimator instead of dividing by zero; tau^2 -> infinity approaches the
// paired estimator when the experiment has no unpaired units.
std::pair<EstimateReport, EstimateReport> collaborative_estimate(
    const PairedDataset& ds, const VarianceComponents& vc, double level = 0.95);

EfficiencyReport relative_efficiency(const VarianceComponents& vc);

// Normal-limit interval: estimate +- z_{(1+level)/2} sqrt(variance).
std::pair<double, double> confidence_interval(double estimate, double variance,
                                              double level);

// Inverse standard normal CDF (Wichura's PPND16); |error| ~ 1e-15.
double inverse_normal_cdf(double p);

enum class AnalyzeMethod { single, paired, coe, gls, all };

std::string_view analyze_method_name(AnalyzeMethod m);

struct AnalysisReport {
  std::vector<EstimateReport> estimates;
  VarianceComponents components;
  BalanceDiagnostics diagnostics;
  PanelCounts counts;
};

// Full procedure: moment variance components (or the supplied known values),
// then the requested estimators with confidence intervals. Cost is linear in
// the record count.
AnalysisReport analyze(const PairedDataset& ds, AnalyzeMethod method,
                       double level = 0.95,
                       std::optional<VarianceComponents> known = std::nullopt);

}  // namespace pairab
