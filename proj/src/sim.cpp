#include "pairab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "pairab/gls.hpp"
#include "pairab/rng.hpp"
#include "pairab/varcomp.hpp"

namespace pairab::sim {

std::string_view setting_name(EffectSetting s) {
  switch (s) {
    case EffectSetting::a: return "a";
    case EffectSetting::b: return "b";
    case EffectSetting::c: return "c";
    case EffectSetting::d: return "d";
  }
  return "?";
}

std::string_view outcome_name(OutcomeType o) {
  switch (o) {
    case OutcomeType::continuous: return "continuous";
    case OutcomeType::binary: return "binary";
    case OutcomeType::count: return "count";
  }
  return "?";
}

EffectSetting parse_setting(std::string_view s) {
  if (s == "a") return EffectSetting::a;
  if (s == "b") return EffectSetting::b;
  if (s == "c") return EffectSetting::c;
  if (s == "d") return EffectSetting::d;
  throw Error(Errc::UnknownSetting, "setting '" + std::string(s) + "' not in {a,b,c,d}");
}

OutcomeType parse_outcome(std::string_view s) {
  if (s == "continuous") return OutcomeType::continuous;
  if (s == "binary") return OutcomeType::binary;
  if (s == "count") return OutcomeType::count;
  throw Error(Errc::InvalidConfig,
              "outcome '" + std::string(s) + "' not in {continuous,binary,count}");
}

void SimulationConfig::check() const {
  if (n <= 0) throw Error(Errc::InvalidConfig, "n must be positive");
  if (n % 4 != 0)
    throw Error(Errc::IndivisibleN,
                "n = " + std::to_string(n) + " must be divisible by 4");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0))
    throw Error(Errc::InvalidConfig, "missing_rate must lie in [0, 1)");
  if (reps < 1) throw Error(Errc::InvalidConfig, "reps must be at least 1");
  if (tau < 0) throw Error(Errc::InvalidConfig, "tau must be nonnegative");
  if (sigma1 < 0 || sigma2 < 0)
    throw Error(Errc::InvalidConfig, "sigma must be nonnegative");
  if (methods.empty()) throw Error(Errc::InvalidConfig, "methods must be nonempty");
}

Designs generate_designs(Index n, std::uint64_t seed) {
  if (n <= 0 || n % 4 != 0)
    throw Error(Errc::IndivisibleN, "n = " + std::to_string(n) + " must be divisible by 4");

  // Sign pairs (+,+), (+,-), (-,+), (-,-), one quarter each, then a uniform
  // shuffle of the assignment.
  std::vector<std::uint8_t> group(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    group[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i / (n / 4));
  rng::Stream stream(seed);
  stream.shuffle(group);

  Designs d;
  d.x1.resize(n);
  d.x2.resize(n);
  for (Index i = 0; i < n; ++i) {
    const std::uint8_t g = group[static_cast<std::size_t>(i)];
    d.x1[i] = g < 2 ? 1.0 : -1.0;
    d.x2[i] = (g % 2 == 0) ? 1.0 : -1.0;
  }
  return d;
}

UserEffects generate_user_effects(Index n, EffectSetting setting, double tau,
                                  std::uint64_t seed) {
  rng::Stream stream(seed);
  UserEffects e;
  switch (setting) {
    case EffectSetting::a: {
      Eigen::ArrayXd u(n);
      for (Index i = 0; i < n; ++i) u[i] = tau * stream.normal();
      e.e1_plus = u;
      e.e1_minus = u;
      e.e2_plus = u;
      e.e2_minus = std::move(u);
      break;
    }
    case EffectSetting::b: {
      Eigen::VectorXd gamma(kLatentDim);
      for (int j = 0; j < kLatentDim; ++j) gamma[j] = tau * stream.normal();
      Eigen::ArrayXd u(n);
      Eigen::VectorXd w(kLatentDim);
      for (Index i = 0; i < n; ++i) {
        for (int j = 0; j < kLatentDim; ++j) w[j] = stream.normal();
        u[i] = w.dot(gamma);
      }
      e.e1_plus = u;
      e.e1_minus = u;
      e.e2_plus = u;
      e.e2_minus = std::move(u);
      break;
    }
    case EffectSetting::c: {
      Eigen::VectorXd gamma1(kLatentDim), gamma2(kLatentDim);
      for (int j = 0; j < kLatentDim; ++j) gamma1[j] = tau * stream.normal();
      for (int j = 0; j < kLatentDim; ++j) gamma2[j] = tau * stream.normal();
      Eigen::ArrayXd u1(n), u2(n);
      Eigen::VectorXd w(kLatentDim);
      for (Index i = 0; i < n; ++i) {
        for (int j = 0; j < kLatentDim; ++j) w[j] = stream.normal();
        u1[i] = w.dot(gamma1);
        u2[i] = w.dot(gamma2);
      }
      e.e1_plus = u1;
      e.e1_minus = std::move(u1);
      e.e2_plus = u2;
      e.e2_minus = std::move(u2);
      break;
    }
    case EffectSetting::d: {
      // gamma_1 acts on arm +1, gamma_2 on arm -1, for both experiments.
      Eigen::VectorXd gamma1(kLatentDim), gamma2(kLatentDim);
      for (int j = 0; j < kLatentDim; ++j) gamma1[j] = tau * stream.normal();
      for (int j = 0; j < kLatentDim; ++j) gamma2[j] = tau * stream.normal();
      Eigen::ArrayXd up(n), um(n);
      Eigen::VectorXd w(kLatentDim);
      for (Index i = 0; i < n; ++i) {
        for (int j = 0; j < kLatentDim; ++j) w[j] = stream.normal();
        up[i] = w.dot(gamma1);
        um[i] = w.dot(gamma2);
      }
      e.e1_plus = up;
      e.e1_minus = um;
      e.e2_plus = std::move(up);
      e.e2_minus = std::move(um);
      break;
    }
  }
  return e;
}

PairedDataset realize(const PotentialOutcomes& po) {
  const Index n = po.size();
  Eigen::VectorXd y1(n), y2(n);
  for (Index i = 0; i < n; ++i) {
    y1[i] = po.designs.x1[i] > 0 ? po.y1_plus[i] : po.y1_minus[i];
    y2[i] = po.designs.x2[i] > 0 ? po.y2_plus[i] : po.y2_minus[i];
  }
  std::vector<char> all(static_cast<std::size_t>(n), 1);
  return PairedDataset::from_columns(std::move(y1), all, std::move(y2), all,
                                     po.designs.x1, po.designs.x2);
}

std::pair<PotentialOutcomes, PairedDataset> generate_outcomes(
    const SimulationConfig& config, int rep_index) {
  config.check();
  const Index n = config.n;
  const auto rep = static_cast<std::uint64_t>(rep_index);

  PotentialOutcomes po;
  po.designs = generate_designs(
      n, rng::derive_seed(config.base_seed, rep,
                          static_cast<std::uint64_t>(rng::Purpose::designs)));
  po.effects = generate_user_effects(
      n, config.setting, config.tau,
      rng::derive_seed(config.base_seed, rep,
                       static_cast<std::uint64_t>(rng::Purpose::effects)));

  rng::Stream noise = rng::substream(config.base_seed, rep, rng::Purpose::noise);
  po.y1_plus.resize(n);
  po.y1_minus.resize(n);
  po.y2_plus.resize(n);
  po.y2_minus.resize(n);
  for (Index i = 0; i < n; ++i) {
    // One noise draw per (unit, experiment), shared by both arms.
    const double eps1 = config.sigma1 * noise.normal();
    const double eps2 = config.sigma2 * noise.normal();
    po.y1_plus[i] = 1.0 + config.beta1 + eps1 + po.effects.e1_plus[i];
    po.y1_minus[i] = 1.0 - config.beta1 + eps1 + po.effects.e1_minus[i];
    po.y2_plus[i] = 1.0 + config.beta2 + eps2 + po.effects.e2_plus[i];
    po.y2_minus[i] = 1.0 - config.beta2 + eps2 + po.effects.e2_minus[i];
  }
  PairedDataset ds = realize(po);
  return {std::move(po), std::move(ds)};
}

PairedDataset apply_missingness(const PairedDataset& ds, double rate,
                                std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw Error(Errc::InvalidConfig, "missing rate must lie in [0, 1)");
  const Index n = ds.size();
  std::vector<char> h1(static_cast<std::size_t>(n)), h2(static_cast<std::size_t>(n));
  std::vector<Index> avail1, avail2;
  for (Index i = 0; i < n; ++i) {
    h1[static_cast<std::size_t>(i)] = ds.has_y1(i) ? 1 : 0;
    h2[static_cast<std::size_t>(i)] = ds.has_y2(i) ? 1 : 0;
    if (ds.has_y1(i)) avail1.push_back(i);
    if (ds.has_y2(i)) avail2.push_back(i);
  }

  const auto drop = static_cast<std::size_t>(static_cast<double>(n) * rate);
  rng::Stream stream(seed);
  for (std::size_t pick : stream.sample_without_replacement(avail1.size(), drop))
    h1[static_cast<std::size_t>(avail1[pick])] = 0;
  for (std::size_t pick : stream.sample_without_replacement(avail2.size(), drop))
    h2[static_cast<std::size_t>(avail2[pick])] = 0;

  Eigen::VectorXd y1 = ds.y1(), y2 = ds.y2();
  for (Index i = 0; i < n; ++i) {
    if (!h1[static_cast<std::size_t>(i)]) y1[i] = 0.0;
    if (!h2[static_cast<std::size_t>(i)]) y2[i] = 0.0;
  }
  std::vector<std::string> ids;
  if (ds.has_explicit_ids()) {
    ids.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) ids.push_back(ds.unit_id(i));
  }
  return PairedDataset::from_columns(std::move(y1), std::move(h1), std::move(y2),
                                     std::move(h2), ds.x1(), ds.x2(), std::move(ids));
}

namespace {

double median_sorted_copy(Eigen::ArrayXd v) {
  const Index n = v.size();
  std::sort(v.begin(), v.end());
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;  // mean of the two central order stats
}

}  // namespace

PotentialOutcomes transform_binary(const PotentialOutcomes& po) {
  const double threshold = median_sorted_copy(po.y1_plus);
  const auto indicator = [threshold](const Eigen::ArrayXd& y) -> Eigen::ArrayXd {
    return (y > threshold).cast<double>();
  };
  PotentialOutcomes out = po;
  out.y1_plus = indicator(po.y1_plus);
  out.y1_minus = indicator(po.y1_minus);
  out.y2_plus = indicator(po.y2_plus);
  out.y2_minus = indicator(po.y2_minus);
  return out;
}

PotentialOutcomes transform_count(const PotentialOutcomes& po) {
  const double global_min =
      std::min(std::min(po.y1_plus.minCoeff(), po.y1_minus.minCoeff()),
               std::min(po.y2_plus.minCoeff(), po.y2_minus.minCoeff()));
  const auto counts = [global_min](const Eigen::ArrayXd& y) -> Eigen::ArrayXd {
    return (y - global_min).sqrt().floor();
  };
  PotentialOutcomes out = po;
  out.y1_plus = counts(po.y1_plus);
  out.y1_minus = counts(po.y1_minus);
  out.y2_plus = counts(po.y2_plus);
  out.y2_minus = counts(po.y2_minus);
  return out;
}

double true_ate(const PotentialOutcomes& po, int experiment) {
  const Eigen::ArrayXd& plus = experiment == 1 ? po.y1_plus : po.y2_plus;
  const Eigen::ArrayXd& minus = experiment == 1 ? po.y1_minus : po.y2_minus;
  double sum = 0;
  for (Index i = 0; i < po.size(); ++i) sum += plus[i] - minus[i];
  return sum / (2.0 * static_cast<double>(po.size()));
}

double true_ate_mean_difference(const PotentialOutcomes& po, int experiment) {
  return 2.0 * true_ate(po, experiment);
}

std::vector<SimulationConfig> GridSpec::cells() const {
  std::vector<SimulationConfig> out;
  for (EffectSetting s : settings)
    for (double tau : taus)
      for (Index n : ns)
        for (double r : missing_rates)
          for (OutcomeType o : outcomes) {
            SimulationConfig c;
            c.n = n;
            c.beta1 = beta1;
            c.beta2 = beta2;
            c.sigma1 = sigma1;
            c.sigma2 = sigma2;
            c.tau = tau;
            c.setting = s;
            c.missing_rate = r;
            c.outcome = o;
            c.reps = reps;
            c.base_seed = base_seed;
            c.methods = methods;
            out.push_back(std::move(c));
          }
  return out;
}

namespace {

struct RepErrors {
  // Squared error per method for beta1, one replicate.
  double single = 0, paired = 0, coe = 0, gls = 0;
};

RepErrors run_replicate(const SimulationConfig& config, int rep, bool want_paired,
                        bool want_coe, bool want_gls) {
  auto [po, full] = generate_outcomes(config, rep);

  double target = config.beta1;
  PairedDataset ds = std::move(full);
  if (config.outcome != OutcomeType::continuous) {
    const PotentialOutcomes transformed = config.outcome == OutcomeType::binary
                                              ? transform_binary(po)
                                              : transform_count(po);
    target = true_ate(transformed, 1);
    ds = realize(transformed);
  }
  if (config.missing_rate > 0.0)
    ds = apply_missingness(
        ds, config.missing_rate,
        rng::derive_seed(config.base_seed, static_cast<std::uint64_t>(rep),
                         static_cast<std::uint64_t>(rng::Purpose::missingness)));

  const VarianceComponents vc = estimate_components(ds);
  const auto sqerr = [target](double est) {
    const double d = est - target;
    return d * d;
  };

  RepErrors e;
  e.single = sqerr(single_estimate(ds, 1, vc).value);
  if (want_paired) e.paired = sqerr(paired_estimate(ds, vc).beta1);
  if (want_coe) e.coe = sqerr(collaborative_estimate(ds, vc).first.estimate);
  if (want_gls) e.gls = sqerr(gls_partial(ds, vc).beta(1));
  return e;
}

}  // namespace

std::vector<GridRow> run_cell(const SimulationConfig& config, int threads) {
  config.check();
  const auto has = [&](Method m) {
    return std::find(config.methods.begin(), config.methods.end(), m) !=
           config.methods.end();
  };
  const bool want_paired = has(Method::paired);
  const bool want_coe = has(Method::coe);
  const bool want_gls = has(Method::gls);

  // One slot per replicate; workers fill disjoint slots and the reduction
  // below runs in replicate order, so the result is schedule independent.
  std::vector<RepErrors> errors(static_cast<std::size_t>(config.reps));
  const int workers = std::max(1, std::min<int>(threads, config.reps));
  if (workers == 1) {
    for (int r = 0; r < config.reps; ++r)
      errors[static_cast<std::size_t>(r)] =
          run_replicate(config, r, want_paired, want_coe, want_gls);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int r = w; r < config.reps; r += workers)
            errors[static_cast<std::size_t>(r)] =
                run_replicate(config, r, want_paired, want_coe, want_gls);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  double mse_single = 0, mse_paired = 0, mse_coe = 0, mse_gls = 0;
  for (const RepErrors& e : errors) {
    mse_single += e.single;
    mse_paired += e.paired;
    mse_coe += e.coe;
    mse_gls += e.gls;
  }

  std::vector<GridRow> rows;
  const auto emit = [&](Method m, double mse) {
    GridRow row;
    row.setting = config.setting;
    row.tau = config.tau;
    row.n = config.n;
    row.missing_rate = config.missing_rate;
    row.outcome = config.outcome;
    row.method = m;
    row.mse_ratio = mse / mse_single;
    row.reps = config.reps;
    rows.push_back(row);
  };
  for (Method m : {Method::single, Method::paired, Method::coe, Method::gls}) {
    if (!has(m)) continue;
    switch (m) {
      case Method::single: emit(m, mse_single); break;
      case Method::paired: emit(m, mse_paired); break;
      case Method::coe: emit(m, mse_coe); break;
      case Method::gls: emit(m, mse_gls); break;
    }
  }
  return rows;
}

GridResult run_grid(const GridSpec& spec, int threads) {
  GridResult result;
  for (const SimulationConfig& cell : spec.cells()) {
    std::vector<GridRow> rows = run_cell(cell, threads);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  return result;
}

}  // namespace pairab::sim
