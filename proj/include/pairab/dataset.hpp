#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairab/errors.hpp"

namespace pairab {

using Eigen::Index;

// One experimental unit: two design levels (always observed, coded -1/+1)
// and two optional outcomes. Absent outcomes are genuinely absent, never a
// sentinel value.
struct UnitRecord {
  std::string unit_id;
  std::optional<double> y1;
  int x1 = 1;
  std::optional<double> y2;
  int x2 = 1;

  friend bool operator==(const UnitRecord&, const UnitRecord&) = default;
};

// Outcome-presence panels. A record's panel depends only on which outcomes
// are present.
enum class Panel : std::uint8_t {
  both = 0,         // y1 and y2 observed
  first_only = 1,   // only y1
  second_only = 2,  // only y2
  none = 3,         // neither; ignored by every estimator
};

struct PanelCounts {
  Index n0 = 0;  // both outcomes
  Index n1 = 0;  // first only
  Index n2 = 0;  // second only
  Index n_ignored = 0;

  friend bool operator==(const PanelCounts&, const PanelCounts&) = default;
};

// Validated, immutable column store of unit records plus the panel
// partition. Outcome columns hold 0.0 in absent slots; all numeric access is
// mediated by the panel index vectors, so absent slots are never read.
class PairedDataset {
 public:
  // Validates and panels raw records. Rejects empty input, duplicated
  // unit_ids and design levels outside {-1, +1}.
  static PairedDataset validate(std::vector<UnitRecord> raw);

  // Trusted constructor for generated data: columns must already satisfy the
  // record invariants and ids (if given) must be distinct. Empty ids means
  // synthetic ids "0", "1", ...
  static PairedDataset from_columns(Eigen::VectorXd y1, std::vector<char> has_y1,
                                    Eigen::VectorXd y2, std::vector<char> has_y2,
                                    Eigen::VectorXd x1, Eigen::VectorXd x2,
                                    std::vector<std::string> ids = {});

  Index size() const { return x1_.size(); }

  const std::vector<Index>& p0() const { return p0_; }
  const std::vector<Index>& p1() const { return p1_; }
  const std::vector<Index>& p2() const { return p2_; }
  const std::vector<Index>& p3() const { return p3_; }

  PanelCounts counts() const {
    return {static_cast<Index>(p0_.size()), static_cast<Index>(p1_.size()),
            static_cast<Index>(p2_.size()), static_cast<Index>(p3_.size())};
  }

  Panel panel_of(Index i) const { return tag_[static_cast<std::size_t>(i)]; }

  bool has_y1(Index i) const {
    const Panel p = panel_of(i);
    return p == Panel::both || p == Panel::first_only;
  }
  bool has_y2(Index i) const {
    const Panel p = panel_of(i);
    return p == Panel::both || p == Panel::second_only;
  }

  // Design levels as doubles (+-1.0), the form every estimator consumes.
  const Eigen::VectorXd& x1() const { return x1_; }
  const Eigen::VectorXd& x2() const { return x2_; }
  // Outcome columns; entry i is meaningful only when the panel says so.
  const Eigen::VectorXd& y1() const { return y1_; }
  const Eigen::VectorXd& y2() const { return y2_; }

  std::string unit_id(Index i) const {
    return ids_.empty() ? std::to_string(i) : ids_[static_cast<std::size_t>(i)];
  }

  // False when ids are the synthetic "0", "1", ... of generated data.
  bool has_explicit_ids() const { return !ids_.empty(); }

  UnitRecord record(Index i) const {
    UnitRecord r;
    r.unit_id = unit_id(i);
    if (has_y1(i)) r.y1 = y1_[i];
    if (has_y2(i)) r.y2 = y2_[i];
    r.x1 = static_cast<int>(x1_[i]);
    r.x2 = static_cast<int>(x2_[i]);
    return r;
  }

  std::vector<UnitRecord> records() const {
    std::vector<UnitRecord> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Index i = 0; i < size(); ++i) out.push_back(record(i));
    return out;
  }

 private:
  PairedDataset() = default;
  void build_panels(const std::vector<char>& has_y1, const std::vector<char>& has_y2);

  Eigen::VectorXd y1_, y2_;
  Eigen::VectorXd x1_, x2_;
  std::vector<Panel> tag_;
  std::vector<Index> p0_, p1_, p2_, p3_;
  std::vector<std::string> ids_;
};

// The five near-balance/orthogonality sums, each normalized by the total
// record count. Values near zero mean the realized design is close to the
// balanced-and-orthogonal ideal; a large value warns that the raw-sum
// estimators may carry intercept-induced bias. The warning never blocks
// estimation.
struct BalanceDiagnostics {
  double s1_p0 = 0;   // sum of x1 over the both-outcomes panel / n
  double s2_p0 = 0;   // sum of x2 over the both-outcomes panel / n
  double s1_p1 = 0;   // sum of x1 over the first-only panel / n
  double s2_p2 = 0;   // sum of x2 over the second-only panel / n
  double s12_p0 = 0;  // sum of x1*x2 over the both-outcomes panel / n

  static constexpr double kWarnThreshold = 0.05;

  std::array<double, 5> values() const { return {s1_p0, s2_p0, s1_p1, s2_p2, s12_p0}; }

  bool flagged() const {
    for (double v : values())
      if (std::abs(v) > kWarnThreshold) return true;
    return false;
  }
};

PairedDataset validate_dataset(std::vector<UnitRecord> raw);

BalanceDiagnostics balance_diagnostics(const PairedDataset& ds);

}  // namespace pairab
