#include <CLI11.hpp>
#include <cstdlib>
#include <string>

#include "cli/commands.hpp"

using namespace pairab;

namespace {

std::uint64_t seed_from_env_or(std::uint64_t fallback) {
  if (const char* env = std::getenv("PAIRAB_SEED"))
    return std::strtoull(env, nullptr, 10);
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairab: collaborative analysis of paired A/B tests"};
  app.require_subcommand(1);

  // analyze
  cli::AnalyzeRequest analyze_req;
  std::string method_name = "all";
  std::vector<double> known;
  CLI::App* analyze = app.add_subcommand("analyze", "analyze a paired-outcomes CSV");
  analyze->add_option("--input,-i", analyze_req.input_path, "input CSV")->required();
  analyze->add_option("--method,-m", method_name, "single|paired|coe|gls|all");
  analyze->add_option("--level", analyze_req.level, "confidence level (default 0.95)");
  analyze->add_option("--output,-o", analyze_req.output_path,
                      "report path (default: stdout)");
  analyze
      ->add_option("--known-components", known,
                   "tau2,sigma1_2,sigma2_2 override for the variance components")
      ->delimiter(',')
      ->expected(3);

  // simulate
  cli::SimulateRequest sim_req;
  std::string config_path, setting = "a", outcome = "continuous", methods;
  double tau = 1.0, missing = 0.0;
  long long n = 1000;
  long long seed = -1;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo MSE-ratio grid");
  simulate->add_option("--config", config_path, "grid configuration JSON");
  simulate->add_option("--setting", setting, "user-effect setting a|b|c|d");
  simulate->add_option("--tau", tau, "user-effect scale");
  simulate->add_option("--n", n, "units per replicate (divisible by 4)");
  simulate->add_option("--missing", missing, "missing rate in [0,1)");
  simulate->add_option("--outcome", outcome, "continuous|binary|count");
  simulate->add_option("--reps", sim_req.spec.reps, "replicates per cell");
  simulate->add_option("--seed", seed, "base seed (fallback: PAIRAB_SEED, then 0)");
  simulate->add_option("--methods", methods, "comma list of single,paired,coe,gls");
  simulate->add_option("--beta1", sim_req.spec.beta1, "treatment effect, experiment 1");
  simulate->add_option("--beta2", sim_req.spec.beta2, "treatment effect, experiment 2");
  simulate->add_option("--sigma1", sim_req.spec.sigma1, "noise sd, experiment 1");
  simulate->add_option("--sigma2", sim_req.spec.sigma2, "noise sd, experiment 2");
  simulate->add_option("--threads", sim_req.threads,
                       "worker threads (does not change results)");
  simulate->add_option("--out", sim_req.out_path, "CSV path (default: stdout)");
  simulate->add_option("--summary", sim_req.summary_path, "JSON summary path");

  // bench
  cli::BenchRequest bench_req;
  std::vector<long long> bench_sizes;
  CLI::App* bench =
      app.add_subcommand("bench", "time the O(n) pipeline against dense GLS");
  bench->add_option("--sizes", bench_sizes, "unit counts")->delimiter(',');
  bench->add_option("--reps", bench_req.reps, "replicates per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (analyze->parsed()) {
    return cli::run_guarded([&] {
      analyze_req.method = cli::parse_analyze_method(method_name);
      if (!known.empty())
        analyze_req.known_components = known_components(known[0], known[1], known[2]);
      return cli::cmd_analyze(analyze_req);
    });
  }

  if (simulate->parsed()) {
    return cli::run_guarded([&] {
      if (!config_path.empty()) {
        sim_req.spec = cli::load_grid_spec(config_path);
      } else {
        sim_req.spec.settings = {sim::parse_setting(setting)};
        sim_req.spec.taus = {tau};
        sim_req.spec.ns = {static_cast<Index>(n)};
        sim_req.spec.missing_rates = {missing};
        sim_req.spec.outcomes = {sim::parse_outcome(outcome)};
        if (!methods.empty()) sim_req.spec.methods = cli::parse_method_list(methods);
      }
      sim_req.spec.base_seed =
          seed >= 0 ? static_cast<std::uint64_t>(seed) : seed_from_env_or(0);
      return cli::cmd_simulate(sim_req);
    });
  }

  return cli::run_guarded([&] {
    if (!bench_sizes.empty()) {
      bench_req.sizes.clear();
      for (long long s : bench_sizes) bench_req.sizes.push_back(static_cast<Index>(s));
    }
    bench_req.base_seed = seed_from_env_or(0);
    return cli::cmd_bench(bench_req);
  });
}
