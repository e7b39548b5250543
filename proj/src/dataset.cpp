#include "pairab/dataset.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace pairab {

void PairedDataset::build_panels(const std::vector<char>& has_y1,
                                 const std::vector<char>& has_y2) {
  const auto n = has_y1.size();
  tag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Panel p;
    if (has_y1[i] && has_y2[i]) {
      p = Panel::both;
      p0_.push_back(static_cast<Index>(i));
    } else if (has_y1[i]) {
      p = Panel::first_only;
      p1_.push_back(static_cast<Index>(i));
    } else if (has_y2[i]) {
      p = Panel::second_only;
      p2_.push_back(static_cast<Index>(i));
    } else {
      p = Panel::none;
      p3_.push_back(static_cast<Index>(i));
    }
    tag_[i] = p;
  }
}

PairedDataset PairedDataset::validate(std::vector<UnitRecord> raw) {
  if (raw.empty()) throw Error(Errc::EmptyInput, "no records to validate");

  std::unordered_set<std::string> seen;
  seen.reserve(raw.size());
  for (const UnitRecord& r : raw) {
    if (!seen.insert(r.unit_id).second)
      throw Error(Errc::DuplicateUnit, "unit_id '" + r.unit_id + "' appears more than once");
    if (r.x1 != -1 && r.x1 != 1)
      throw Error(Errc::InvalidDesign, "unit '" + r.unit_id + "': x1 = " +
                                           std::to_string(r.x1) + ", must be -1 or +1");
    if (r.x2 != -1 && r.x2 != 1)
      throw Error(Errc::InvalidDesign, "unit '" + r.unit_id + "': x2 = " +
                                           std::to_string(r.x2) + ", must be -1 or +1");
  }

  const Index n = static_cast<Index>(raw.size());
  PairedDataset ds;
  ds.y1_.setZero(n);
  ds.y2_.setZero(n);
  ds.x1_.resize(n);
  ds.x2_.resize(n);
  ds.ids_.reserve(raw.size());
  std::vector<char> h1(raw.size()), h2(raw.size());
  for (Index i = 0; i < n; ++i) {
    UnitRecord& r = raw[static_cast<std::size_t>(i)];
    ds.ids_.push_back(std::move(r.unit_id));
    ds.x1_[i] = static_cast<double>(r.x1);
    ds.x2_[i] = static_cast<double>(r.x2);
    if (r.y1) {
      ds.y1_[i] = *r.y1;
      h1[static_cast<std::size_t>(i)] = 1;
    }
    if (r.y2) {
      ds.y2_[i] = *r.y2;
      h2[static_cast<std::size_t>(i)] = 1;
    }
  }
  ds.build_panels(h1, h2);
  return ds;
}

PairedDataset PairedDataset::from_columns(Eigen::VectorXd y1, std::vector<char> has_y1,
                                          Eigen::VectorXd y2, std::vector<char> has_y2,
                                          Eigen::VectorXd x1, Eigen::VectorXd x2,
                                          std::vector<std::string> ids) {
  PairedDataset ds;
  ds.y1_ = std::move(y1);
  ds.y2_ = std::move(y2);
  ds.x1_ = std::move(x1);
  ds.x2_ = std::move(x2);
  ds.ids_ = std::move(ids);
  ds.build_panels(has_y1, has_y2);
  return ds;
}

PairedDataset validate_dataset(std::vector<UnitRecord> raw) {
  return PairedDataset::validate(std::move(raw));
}

BalanceDiagnostics balance_diagnostics(const PairedDataset& ds) {
  double s1_p0 = 0, s2_p0 = 0, s12_p0 = 0;
  for (Index i : ds.p0()) {
    s1_p0 += ds.x1()[i];
    s2_p0 += ds.x2()[i];
    s12_p0 += ds.x1()[i] * ds.x2()[i];
  }
  double s1_p1 = 0;
  for (Index i : ds.p1()) s1_p1 += ds.x1()[i];
  double s2_p2 = 0;
  for (Index i : ds.p2()) s2_p2 += ds.x2()[i];

  const double n = static_cast<double>(ds.size());
  BalanceDiagnostics d;
  d.s1_p0 = s1_p0 / n;
  d.s2_p0 = s2_p0 / n;
  d.s1_p1 = s1_p1 / n;
  d.s2_p2 = s2_p2 / n;
  d.s12_p0 = s12_p0 / n;
  return d;
}

}  // namespace pairab
