#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "pairab/dataset.hpp"
#include "pairab/estimators.hpp"

namespace pairab::sim {

// User-effect generation settings. Only (a) matches the estimation model
// exactly; (b)-(d) probe robustness under misspecification.
//   a: one iid N(0, tau^2) effect per unit
//   b: w_i' gamma with a shared 10-dim gamma ~ N(0, tau^2 I)
//   c: separate gamma_k per experiment
//   d: arm-dependent mixing of gamma_1 (arm +1) and gamma_2 (arm -1)
enum class EffectSetting { a, b, c, d };

enum class OutcomeType { continuous, binary, count };

std::string_view setting_name(EffectSetting s);
std::string_view outcome_name(OutcomeType o);
EffectSetting parse_setting(std::string_view s);  // throws UnknownSetting
OutcomeType parse_outcome(std::string_view s);    // throws InvalidConfig

inline constexpr int kLatentDim = 10;  // dimension of the latent covariates w_i

struct SimulationConfig {
  Index n = 1000;
  double beta1 = 1.0, beta2 = 1.0;
  double sigma1 = 1.0, sigma2 = 1.0;
  double tau = 1.0;
  EffectSetting setting = EffectSetting::a;
  double missing_rate = 0.0;  // in [0, 1)
  OutcomeType outcome = OutcomeType::continuous;
  int reps = 100;
  std::uint64_t base_seed = 0;
  std::vector<Method> methods{Method::single, Method::paired, Method::coe};

  void check() const;  // throws InvalidConfig / IndivisibleN
};

struct Designs {
  Eigen::VectorXd x1, x2;  // entries +-1.0
};

// Uniformly random partition of n units (n divisible by 4) into the four
// equal (x1, x2) sign groups; all three balance sums are exactly zero.
Designs generate_designs(Index n, std::uint64_t seed);

// Realized user effects per (experiment, arm). Settings (a) and (b) fill all
// four columns with the same per-unit value; (c) differs by experiment; (d)
// differs by arm.
struct UserEffects {
  Eigen::ArrayXd e1_plus, e1_minus, e2_plus, e2_minus;

  double at(Index i, int experiment, double arm) const {
    if (experiment == 1) return arm > 0 ? e1_plus[i] : e1_minus[i];
    return arm > 0 ? e2_plus[i] : e2_minus[i];
  }
};

UserEffects generate_user_effects(Index n, EffectSetting setting, double tau,
                                  std::uint64_t seed);

// Both potential outcomes per (unit, experiment) plus the designs that pick
// the realized one. One noise draw is shared by the two arms of a
// (unit, experiment), so arm contrasts are noise free except for the
// arm-dependent effects of setting (d).
struct PotentialOutcomes {
  Designs designs;
  Eigen::ArrayXd y1_plus, y1_minus, y2_plus, y2_minus;
  UserEffects effects;

  Index size() const { return y1_plus.size(); }
};

// Outcomes for replicate rep_index of the configured cell; substreams are
// keyed by (base_seed, rep_index), independent of scheduling. Returns the
// continuous potential outcomes and the realized, fully paired dataset.
std::pair<PotentialOutcomes, PairedDataset> generate_outcomes(
    const SimulationConfig& config, int rep_index);

// The realized dataset a design selects from the potential outcomes.
PairedDataset realize(const PotentialOutcomes& po);

// Marks floor(n * rate) outcomes missing per experiment, uniformly without
// replacement and independently across experiments; panels are recomputed.
PairedDataset apply_missingness(const PairedDataset& ds, double rate,
                                std::uint64_t seed);

// Binary: indicator of exceeding the median of the experiment-1 arm +1
// potential outcomes (even length: mean of the two central order
// statistics).
PotentialOutcomes transform_binary(const PotentialOutcomes& po);

// Count: floor(sqrt(y - min)) with the minimum over all units, experiments
// and arms.
PotentialOutcomes transform_count(const PotentialOutcomes& po);

// Realized average treatment effect, sum of arm contrasts over 2n. On the
// linear continuous scale this equals beta_k exactly; it is the per-unit
// slope against x, i.e. half the conventional mean difference between arms.
double true_ate(const PotentialOutcomes& po, int experiment);

// The conventional mean-difference ATE (twice true_ate).
double true_ate_mean_difference(const PotentialOutcomes& po, int experiment);

struct GridRow {
  EffectSetting setting;
  double tau = 0;
  Index n = 0;
  double missing_rate = 0;
  OutcomeType outcome;
  Method method;
  double mse_ratio = 0;
  int reps = 0;
};

struct GridResult {
  std::vector<GridRow> rows;
};

// Cartesian grid over the varied dimensions; remaining parameters are
// shared.
struct GridSpec {
  std::vector<EffectSetting> settings{EffectSetting::a};
  std::vector<double> taus{1.0};
  std::vector<Index> ns{1000};
  std::vector<double> missing_rates{0.0};
  std::vector<OutcomeType> outcomes{OutcomeType::continuous};
  double beta1 = 1.0, beta2 = 1.0;
  double sigma1 = 1.0, sigma2 = 1.0;
  int reps = 100;
  std::uint64_t base_seed = 0;
  std::vector<Method> methods{Method::single, Method::paired, Method::coe};

  std::vector<SimulationConfig> cells() const;
};

// Replicated MSE ratios against the single estimator for one cell. The
// target is beta1 for continuous outcomes and the per-replicate realized ATE
// for discrete ones. Replicates run in parallel over `threads`; per-
// replicate streams and the fixed-order reduction make the result
// independent of the thread count.
std::vector<GridRow> run_cell(const SimulationConfig& config, int threads = 1);

GridResult run_grid(const GridSpec& spec, int threads = 1);

}  // namespace pairab::sim
