#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pairab/estimators.hpp"
#include "pairab/sim.hpp"

namespace pairab::cli {

struct AnalyzeRequest {
  std::string input_path;
  AnalyzeMethod method = AnalyzeMethod::all;
  double level = 0.95;
  std::string output_path;  // empty -> stdout
  std::optional<VarianceComponents> known_components;
};

int cmd_analyze(const AnalyzeRequest& req);

struct SimulateRequest {
  sim::GridSpec spec;
  std::string out_path;      // empty -> stdout
  std::string summary_path;  // empty -> no summary
  int threads = 1;
};

int cmd_simulate(const SimulateRequest& req);

// Wall-clock comparison of the O(n) collaborative pipeline against the
// dense GLS route on identical data.
struct BenchRequest {
  std::vector<Index> sizes{500, 1000, 2000};
  int reps = 5;
  std::uint64_t base_seed = 0;
};

int cmd_bench(const BenchRequest& req);

// Grid configuration from a JSON document (see README for the schema).
sim::GridSpec load_grid_spec(const std::string& path);

AnalyzeMethod parse_analyze_method(const std::string& name);
std::vector<Method> parse_method_list(const std::string& csv);

// Runs fn, mapping pairab errors to the exit-code taxonomy: 1 io,
// 2 validation, 3 estimation.
int run_guarded(const std::function<int()>& fn);

}  // namespace pairab::cli
