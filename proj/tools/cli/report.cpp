#include "cli/report.hpp"

#include <cstdio>
#include <fstream>

#include "pairab/errors.hpp"

namespace pairab::cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (need_comma_) out_ += ',';
  out_ += '\n';
  indent();
}

void JsonWriter::indent() {
  for (int i = 0; i < depth_; ++i) out_ += "  ";
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  ++depth_;
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  --depth_;
  out_ += '\n';
  indent();
  out_ += '}';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  ++depth_;
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  --depth_;
  out_ += '\n';
  indent();
  out_ += ']';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  separator();
  out_ += '"';
  out_ += name;
  out_ += "\": ";
  need_comma_ = true;
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  out_ += format_double(v);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separator();
  out_ += std::to_string(v);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separator();
  out_ += '"';
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\r': out_ += "\\r"; break;
      case '\t': out_ += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
  need_comma_ = true;
  return *this;
}

std::string analysis_report_json(const AnalysisReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("estimates").begin_array();
  for (const EstimateReport& e : report.estimates) {
    w.begin_object();
    w.key("experiment").value(static_cast<long long>(e.experiment));
    w.key("method").value(std::string(method_name(e.method)));
    w.key("estimate").value(e.estimate);
    w.key("std_error").value(e.std_error);
    w.key("ci_lower").value(e.ci_lower);
    w.key("ci_upper").value(e.ci_upper);
    w.key("level").value(e.level);
    w.end_object();
  }
  w.end_array();
  w.key("variance_components").begin_object();
  w.key("tau2").value(report.components.tau2);
  w.key("sigma1_2").value(report.components.sigma1_2);
  w.key("sigma2_2").value(report.components.sigma2_2);
  w.key("projected").begin_array();
  for (bool p : report.components.projected) w.value(p);
  w.end_array();
  w.end_object();
  w.key("counts").begin_object();
  w.key("n0").value(static_cast<long long>(report.counts.n0));
  w.key("n1").value(static_cast<long long>(report.counts.n1));
  w.key("n2").value(static_cast<long long>(report.counts.n2));
  w.key("n_ignored").value(static_cast<long long>(report.counts.n_ignored));
  w.end_object();
  w.key("diagnostics").begin_object();
  w.key("s1_p0").value(report.diagnostics.s1_p0);
  w.key("s2_p0").value(report.diagnostics.s2_p0);
  w.key("s1_p1").value(report.diagnostics.s1_p1);
  w.key("s2_p2").value(report.diagnostics.s2_p2);
  w.key("s12_p0").value(report.diagnostics.s12_p0);
  w.key("flagged").value(report.diagnostics.flagged());
  w.end_object();
  w.end_object();
  std::string out = w.str();
  out += '\n';
  return out.substr(1);  // drop the leading newline before the root brace
}

std::string grid_csv(const sim::GridResult& result) {
  std::string out = "setting,tau,n,missing_rate,outcome,method,mse_ratio,reps\n";
  for (const sim::GridRow& row : result.rows) {
    out += sim::setting_name(row.setting);
    out += ',';
    out += format_double(row.tau);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.missing_rate);
    out += ',';
    out += sim::outcome_name(row.outcome);
    out += ',';
    out += method_name(row.method);
    out += ',';
    out += format_double(row.mse_ratio);
    out += ',';
    out += std::to_string(row.reps);
    out += '\n';
  }
  return out;
}

std::string simulate_summary_json(const sim::GridSpec& spec, const sim::GridResult& result,
                                  const std::string& csv_path) {
  JsonWriter w;
  w.begin_object();
  w.key("config").begin_object();
  w.key("settings").begin_array();
  for (auto s : spec.settings) w.value(std::string(sim::setting_name(s)));
  w.end_array();
  w.key("taus").begin_array();
  for (double t : spec.taus) w.value(t);
  w.end_array();
  w.key("ns").begin_array();
  for (Index n : spec.ns) w.value(static_cast<long long>(n));
  w.end_array();
  w.key("missing_rates").begin_array();
  for (double r : spec.missing_rates) w.value(r);
  w.end_array();
  w.key("outcomes").begin_array();
  for (auto o : spec.outcomes) w.value(std::string(sim::outcome_name(o)));
  w.end_array();
  w.key("methods").begin_array();
  for (Method m : spec.methods) w.value(std::string(method_name(m)));
  w.end_array();
  w.key("beta1").value(spec.beta1);
  w.key("beta2").value(spec.beta2);
  w.key("sigma1").value(spec.sigma1);
  w.key("sigma2").value(spec.sigma2);
  w.key("reps").value(static_cast<long long>(spec.reps));
  w.key("base_seed").value(static_cast<long long>(spec.base_seed));
  w.end_object();
  w.key("cells").value(static_cast<long long>(spec.cells().size()));
  w.key("rows").value(static_cast<long long>(result.rows.size()));
  w.key("csv").value(csv_path);
  w.end_object();
  std::string out = w.str();
  out += '\n';
  return out.substr(1);
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::IoError, "write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(Errc::IoError, "cannot rename '" + tmp + "' to '" + path + "'");
  }
}

}  // namespace pairab::cli
