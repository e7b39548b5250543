#include "pairab/estimators.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <string>

#include "pairab/gls.hpp"

namespace pairab {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::single: return "single";
    case Method::paired: return "paired";
    case Method::coe: return "coe";
    case Method::gls: return "gls";
  }
  return "?";
}

std::string_view analyze_method_name(AnalyzeMethod m) {
  switch (m) {
    case AnalyzeMethod::single: return "single";
    case AnalyzeMethod::paired: return "paired";
    case AnalyzeMethod::coe: return "coe";
    case AnalyzeMethod::gls: return "gls";
    case AnalyzeMethod::all: return "all";
  }
  return "?";
}

SuffStats sufficient_stats(const PairedDataset& ds) {
  SuffStats st;
  const auto& x1 = ds.x1();
  const auto& x2 = ds.x2();
  const auto& y1 = ds.y1();
  const auto& y2 = ds.y2();

  st.n0 = static_cast<Index>(ds.p0().size());
  st.n1 = static_cast<Index>(ds.p1().size());
  st.n2 = static_cast<Index>(ds.p2().size());
  for (Index i : ds.p0()) {
    const double z = y1[i] - y2[i];
    st.s0_x1y1 += x1[i] * y1[i];
    st.s0_x2y2 += x2[i] * y2[i];
    st.s0_x1z += x1[i] * z;
    st.s0_x2z += x2[i] * z;
    st.s0_y1 += y1[i];
    st.s0_y2 += y2[i];
    st.s0_x1 += x1[i];
    st.s0_x2 += x2[i];
    st.s0_x1x2 += x1[i] * x2[i];
  }
  for (Index i : ds.p1()) {
    st.s1_x1y1 += x1[i] * y1[i];
    st.s1_y1 += y1[i];
    st.s1_x1 += x1[i];
  }
  for (Index i : ds.p2()) {
    st.s2_x2y2 += x2[i] * y2[i];
    st.s2_y2 += y2[i];
    st.s2_x2 += x2[i];
  }
  return st;
}

namespace {

void require_both_arms(Index count, double sign_sum, int experiment, Errc errc) {
  // count entries of +-1 summing to sign_sum: both arms present iff
  // |sign_sum| < count.
  if (count == 0 || std::abs(sign_sum) >= static_cast<double>(count))
    throw Error(errc, "experiment " + std::to_string(experiment) +
                          " needs outcomes in both arms");
}

Estimate single_from_stats(const SuffStats& st, int experiment,
                           const VarianceComponents& vc) {
  Estimate e;
  if (experiment == 1) {
    const Index m = st.n0 + st.n1;
    if (m == 0) throw Error(Errc::NoData, "experiment 1 has no outcomes");
    require_both_arms(m, st.s0_x1 + st.s1_x1, 1, Errc::NoData);
    e.value = (st.s0_x1y1 + st.s1_x1y1) / static_cast<double>(m);
    e.variance = (vc.tau2 + vc.sigma1_2) / static_cast<double>(m);
  } else {
    const Index m = st.n0 + st.n2;
    if (m == 0) throw Error(Errc::NoData, "experiment 2 has no outcomes");
    require_both_arms(m, st.s0_x2 + st.s2_x2, 2, Errc::NoData);
    e.value = (st.s0_x2y2 + st.s2_x2y2) / static_cast<double>(m);
    e.variance = (vc.tau2 + vc.sigma2_2) / static_cast<double>(m);
  }
  return e;
}

PairedEstimates paired_from_stats(const SuffStats& st, const VarianceComponents& vc) {
  if (st.n0 == 0) throw Error(Errc::NoPairedData, "no units with both outcomes");
  require_both_arms(st.n0, st.s0_x1, 1, Errc::NoPairedData);
  require_both_arms(st.n0, st.s0_x2, 2, Errc::NoPairedData);
  const double n0 = static_cast<double>(st.n0);
  PairedEstimates p;
  p.beta1 = st.s0_x1z / n0;
  p.beta2 = -st.s0_x2z / n0;
  p.variance = (vc.sigma1_2 + vc.sigma2_2) / n0;
  return p;
}

// Collaborative point estimate and variance for one experiment, from the
// three statistics (paired sum, shared single sum, unshared single sum).
// With delta = tau^2 (sigma1^2 + sigma2^2) + sigma1^2 sigma2^2 the inverse-
// variance weights are
//   paired sum:   tau^2 / delta
//   shared sum:   sigma_other^2 / delta
//   unshared sum: 1 / (sigma_own^2 + tau^2)
// which is the closed-form combination multiplied through by tau^2; tau^2=0
// is then a removable singularity and reproduces the single estimator, in
// that case taken verbatim from the single path so the reduction is exact.
Estimate coe_one(double paired_sum, double shared_sum, double unshared_sum,
                 Index n0, Index n_unshared, double sigma_own, double sigma_other,
                 const SuffStats& st, int experiment, const VarianceComponents& vc) {
  if (n0 == 0)
    throw Error(Errc::NoPairedData,
                "collaborative estimation needs units with both outcomes");
  if (vc.tau2 == 0.0) return single_from_stats(st, experiment, vc);

  const double delta =
      vc.tau2 * (vc.sigma1_2 + vc.sigma2_2) + vc.sigma1_2 * vc.sigma2_2;
  const double w_paired = vc.tau2 / delta;
  const double w_shared = sigma_other / delta;
  const double w_unshared = 1.0 / (sigma_own + vc.tau2);

  const double denom = (w_paired + w_shared) * static_cast<double>(n0) +
                       w_unshared * static_cast<double>(n_unshared);
  Estimate e;
  e.value = (w_paired * paired_sum + w_shared * shared_sum + w_unshared * unshared_sum) /
            denom;
  e.variance = 1.0 / denom;
  return e;
}

EstimateReport make_report(int experiment, Method method, const Estimate& est,
                           double level, const VarianceComponents& vc,
                           const PanelCounts& counts) {
  EstimateReport r;
  r.experiment = experiment;
  r.method = method;
  r.estimate = est.value;
  r.variance = est.variance;
  r.std_error = std::sqrt(est.variance);
  std::tie(r.ci_lower, r.ci_upper) = confidence_interval(est.value, est.variance, level);
  r.level = level;
  r.components = vc;
  r.counts = counts;
  return r;
}

}  // namespace

Estimate single_estimate(const PairedDataset& ds, int experiment,
                         const VarianceComponents& vc) {
  return single_from_stats(sufficient_stats(ds), experiment, vc);
}

PairedEstimates paired_estimate(const PairedDataset& ds, const VarianceComponents& vc) {
  return paired_from_stats(sufficient_stats(ds), vc);
}

BlueResult blue_combine(const Eigen::VectorXd& estimates,
                        const Eigen::MatrixXd& covariance) {
  const Eigen::Index d = estimates.size();
  if (d == 0 || covariance.rows() != d || covariance.cols() != d)
    throw Error(Errc::SingularCovariance, "covariance shape does not match estimates");

  Eigen::LDLT<Eigen::MatrixXd> ldlt(covariance);
  const Eigen::VectorXd diag = ldlt.vectorD();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || diag.minCoeff() <= 1e-12 * dmax)
    throw Error(Errc::SingularCovariance, "covariance is not positive definite");

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d);
  const Eigen::VectorXd sinv1 = ldlt.solve(ones);
  const double denom = ones.dot(sinv1);
  if (!(denom > 0) || !std::isfinite(denom))
    throw Error(Errc::SingularCovariance, "covariance is not positive definite");

  BlueResult r;
  r.weights = sinv1 / denom;
  r.estimate = r.weights.dot(estimates);
  r.variance = 1.0 / denom;
  return r;
}

std::pair<EstimateReport, EstimateReport> collaborative_estimate(
    const PairedDataset& ds, const VarianceComponents& vc, double level) {
  const SuffStats st = sufficient_stats(ds);
  // The paired statistic for experiment 2 is -sum x2 z, matching the paired
  // estimator's sign, so both statistics estimate beta2 itself.
  const Estimate e1 = coe_one(st.s0_x1z, st.s0_x1y1, st.s1_x1y1, st.n0, st.n1,
                              vc.sigma1_2, vc.sigma2_2, st, 1, vc);
  const Estimate e2 = coe_one(-st.s0_x2z, st.s0_x2y2, st.s2_x2y2, st.n0, st.n2,
                              vc.sigma2_2, vc.sigma1_2, st, 2, vc);
  const PanelCounts counts = ds.counts();
  return {make_report(1, Method::coe, e1, level, vc, counts),
          make_report(2, Method::coe, e2, level, vc, counts)};
}

EfficiencyReport relative_efficiency(const VarianceComponents& vc) {
  const double t = vc.tau2, s1 = vc.sigma1_2, s2 = vc.sigma2_2;
  const double delta = t * (s1 + s2) + s1 * s2;
  const double re_sc = delta / ((s1 + t) * (s2 + t));
  EfficiencyReport r;
  r.re_single_paired = {(s1 + s2) / (s1 + t), (s1 + s2) / (s2 + t)};
  r.re_single_coe = {re_sc, re_sc};
  r.re_paired_coe = {re_sc * (s1 + t) / (s1 + s2), re_sc * (s2 + t) / (s1 + s2)};
  return r;
}

std::pair<double, double> confidence_interval(double estimate, double variance,
                                              double level) {
  const double z = inverse_normal_cdf((1.0 + level) / 2.0);
  const double half = z * std::sqrt(variance);
  return {estimate - half, estimate + half};
}

// Wichura's algorithm AS241, PPND16.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw Error(Errc::InvalidConfig, "quantile level must lie in [0, 1]");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-6) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return q < 0 ? -value : value;
}

AnalysisReport analyze(const PairedDataset& ds, AnalyzeMethod method, double level,
                       std::optional<VarianceComponents> known) {
  AnalysisReport rep;
  rep.diagnostics = balance_diagnostics(ds);
  rep.counts = ds.counts();
  rep.components = known ? *known : estimate_components(ds);
  const VarianceComponents& vc = rep.components;

  const SuffStats st = sufficient_stats(ds);
  const bool all = method == AnalyzeMethod::all;

  std::optional<GlsSolution> gls;
  if (all || method == AnalyzeMethod::gls) gls = gls_partial(ds, vc);
  std::optional<PairedEstimates> paired;
  if (all || method == AnalyzeMethod::paired) paired = paired_from_stats(st, vc);
  std::pair<EstimateReport, EstimateReport> coe;
  if (all || method == AnalyzeMethod::coe) coe = collaborative_estimate(ds, vc, level);

  for (int k = 1; k <= 2; ++k) {
    if (all || method == AnalyzeMethod::single)
      rep.estimates.push_back(make_report(k, Method::single,
                                          single_from_stats(st, k, vc), level, vc,
                                          rep.counts));
    if (paired) {
      const Estimate e{k == 1 ? paired->beta1 : paired->beta2, paired->variance};
      rep.estimates.push_back(make_report(k, Method::paired, e, level, vc, rep.counts));
    }
    if (all || method == AnalyzeMethod::coe)
      rep.estimates.push_back(k == 1 ? coe.first : coe.second);
    if (gls) {
      const Estimate e{gls->beta(k), gls->beta_variance(k)};
      rep.estimates.push_back(make_report(k, Method::gls, e, level, vc, rep.counts));
    }
  }
  return rep;
}

}  // namespace pairab
