#pragma once

#include <string>

#include "pairab/estimators.hpp"
#include "pairab/sim.hpp"

namespace pairab::cli {

// Minimal JSON emitter; every double is printed with 17 significant digits
// so repeated runs are byte identical.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }

  const std::string& str() const { return out_; }

 private:
  void separator();
  void indent();

  std::string out_;
  int depth_ = 0;
  bool need_comma_ = false;
  bool pending_key_ = false;
};

std::string format_double(double v);

std::string analysis_report_json(const AnalysisReport& report);

std::string grid_csv(const sim::GridResult& result);

std::string simulate_summary_json(const sim::GridSpec& spec, const sim::GridResult& result,
                                  const std::string& csv_path);

// Write-to-temp then rename; no partial output survives a failure.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace pairab::cli
