#include "cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cli/csv.hpp"
#include "cli/report.hpp"
#include "pairab/gls.hpp"

namespace pairab::cli {

namespace {

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  atomic_write(path, content);
}

}  // namespace

AnalyzeMethod parse_analyze_method(const std::string& name) {
  if (name == "single") return AnalyzeMethod::single;
  if (name == "paired") return AnalyzeMethod::paired;
  if (name == "coe") return AnalyzeMethod::coe;
  if (name == "gls") return AnalyzeMethod::gls;
  if (name == "all") return AnalyzeMethod::all;
  throw Error(Errc::InvalidConfig,
              "method '" + name + "' not in {single, paired, coe, gls, all}");
}

std::vector<Method> parse_method_list(const std::string& csv) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string name = csv.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (name == "single") out.push_back(Method::single);
    else if (name == "paired") out.push_back(Method::paired);
    else if (name == "coe") out.push_back(Method::coe);
    else if (name == "gls") out.push_back(Method::gls);
    else
      throw Error(Errc::InvalidConfig,
                  "method '" + name + "' not in {single, paired, coe, gls}");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw Error(Errc::InvalidConfig, "method list is empty");
  return out;
}

int cmd_analyze(const AnalyzeRequest& req) {
  if (!(req.level > 0.0 && req.level < 1.0))
    throw Error(Errc::InvalidConfig, "level must lie in (0, 1)");
  const PairedDataset ds = validate_dataset(parse_csv(req.input_path));
  const AnalysisReport report = analyze(ds, req.method, req.level, req.known_components);
  write_or_print(req.output_path, analysis_report_json(report));
  return 0;
}

int cmd_simulate(const SimulateRequest& req) {
  if (req.threads < 1) throw Error(Errc::InvalidConfig, "threads must be at least 1");
  for (const sim::SimulationConfig& cell : req.spec.cells()) cell.check();

  const sim::GridResult result = sim::run_grid(req.spec, req.threads);
  write_or_print(req.out_path, grid_csv(result));
  if (!req.summary_path.empty())
    atomic_write(req.summary_path, simulate_summary_json(req.spec, result, req.out_path));
  return 0;
}

int cmd_bench(const BenchRequest& req) {
  std::printf("n,reps,coe_ms,brute_gls_ms\n");
  for (Index n : req.sizes) {
    if (2 * n > kBruteForceGuard)
      throw Error(Errc::InvalidConfig,
                  "bench size " + std::to_string(n) + " exceeds the dense-oracle guard");
    sim::SimulationConfig config;
    config.n = n;
    config.tau = 2.0;
    config.base_seed = req.base_seed;
    config.reps = req.reps;

    double coe_ms = 0, brute_ms = 0;
    for (int rep = 0; rep < req.reps; ++rep) {
      auto [po, ds] = sim::generate_outcomes(config, rep);
      const auto t0 = std::chrono::steady_clock::now();
      const VarianceComponents vc = estimate_components(ds);
      volatile double sink = collaborative_estimate(ds, vc).first.estimate;
      const auto t1 = std::chrono::steady_clock::now();
      sink = brute_force_gls(ds, vc).beta(1);
      const auto t2 = std::chrono::steady_clock::now();
      (void)sink;
      coe_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
      brute_ms += std::chrono::duration<double, std::milli>(t2 - t1).count();
    }
    std::printf("%lld,%d,%.3f,%.3f\n", static_cast<long long>(n), req.reps,
                coe_ms / req.reps, brute_ms / req.reps);
  }
  return 0;
}

sim::GridSpec load_grid_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, "config '" + path + "': " + e.what());
  }

  sim::GridSpec spec;
  try {
    if (j.contains("settings")) {
      spec.settings.clear();
      for (const auto& s : j.at("settings"))
        spec.settings.push_back(sim::parse_setting(s.get<std::string>()));
    }
    if (j.contains("taus")) spec.taus = j.at("taus").get<std::vector<double>>();
    if (j.contains("ns")) {
      spec.ns.clear();
      for (const auto& n : j.at("ns")) spec.ns.push_back(n.get<Index>());
    }
    if (j.contains("missing_rates"))
      spec.missing_rates = j.at("missing_rates").get<std::vector<double>>();
    if (j.contains("outcomes")) {
      spec.outcomes.clear();
      for (const auto& o : j.at("outcomes"))
        spec.outcomes.push_back(sim::parse_outcome(o.get<std::string>()));
    }
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : j.at("methods")) {
        const std::vector<Method> parsed = parse_method_list(m.get<std::string>());
        spec.methods.insert(spec.methods.end(), parsed.begin(), parsed.end());
      }
    }
    spec.beta1 = j.value("beta1", spec.beta1);
    spec.beta2 = j.value("beta2", spec.beta2);
    spec.sigma1 = j.value("sigma1", spec.sigma1);
    spec.sigma2 = j.value("sigma2", spec.sigma2);
    spec.reps = j.value("reps", spec.reps);
    spec.base_seed = j.value("base_seed", spec.base_seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, "config '" + path + "': " + e.what());
  }
  return spec;
}

int run_guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}

}  // namespace pairab::cli
