#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "pairab/dataset.hpp"
#include "pairab/estimators.hpp"

using namespace pairab;
using test::rec;

TEST_CASE("fully paired records land in panel 0") {
  std::vector<UnitRecord> rs;
  for (int i = 0; i < 4; ++i)
    rs.push_back(rec("u" + std::to_string(i), 1.0 * i, i % 2 ? 1 : -1, 2.0 * i,
                     i < 2 ? 1 : -1));
  const PairedDataset ds = validate_dataset(rs);
  CHECK(ds.counts() == PanelCounts{4, 0, 0, 0});
}

TEST_CASE("panel sizes follow outcome presence") {
  // Layout: n0 rows with both outcomes, n1 with the first only, n2 with the
  // second only, then rows with neither.
  std::vector<UnitRecord> rs;
  int id = 0;
  for (int i = 0; i < 3; ++i) rs.push_back(rec(std::to_string(id++), 1.0, 1, 2.0, -1));
  for (int i = 0; i < 2; ++i)
    rs.push_back(rec(std::to_string(id++), 1.0, -1, std::nullopt, 1));
  for (int i = 0; i < 4; ++i)
    rs.push_back(rec(std::to_string(id++), std::nullopt, 1, 2.0, 1));
  rs.push_back(rec(std::to_string(id++), std::nullopt, -1, std::nullopt, -1));

  const PairedDataset ds = validate_dataset(rs);
  CHECK(ds.counts() == PanelCounts{3, 2, 4, 1});
  for (Index i : ds.p1()) CHECK(ds.panel_of(i) == Panel::first_only);
}

TEST_CASE("validation rejects bad input") {
  CHECK_THROWS_WITH_AS(validate_dataset({}), doctest::Contains("EmptyInput"), Error);

  std::vector<UnitRecord> dup{rec("a", 1.0, 1, 1.0, 1), rec("a", 2.0, -1, 1.0, -1)};
  CHECK_THROWS_WITH_AS(validate_dataset(dup), doctest::Contains("DuplicateUnit"), Error);

  std::vector<UnitRecord> bad{rec("a", 1.0, 0, 1.0, 1)};
  CHECK_THROWS_WITH_AS(validate_dataset(bad), doctest::Contains("InvalidDesign"), Error);
  std::vector<UnitRecord> bad2{rec("a", 1.0, 1, 1.0, 2)};
  CHECK_THROWS_AS(validate_dataset(bad2), Error);
}

TEST_CASE("validate is idempotent") {
  const PairedDataset ds =
      test::random_instance(40, test::vc_of(1, 1, 1), 0.3, /*seed=*/5);
  const PairedDataset again = validate_dataset(ds.records());
  CHECK(again.records() == ds.records());
  CHECK(again.counts() == ds.counts());
}

TEST_CASE("panel partition is permutation invariant") {
  const PairedDataset ds =
      test::random_instance(60, test::vc_of(1, 1, 1), 0.25, /*seed=*/9);
  std::vector<UnitRecord> shuffled = ds.records();
  rng::Stream s(123);
  s.shuffle(shuffled);
  const PairedDataset ds2 = validate_dataset(shuffled);
  CHECK(ds2.counts() == ds.counts());
}

TEST_CASE("balance diagnostics") {
  SUBCASE("orthogonal paired design gives zero sums") {
    const PairedDataset ds = test::paired_ds({1, 2, 3, 4}, {1, 1, -1, -1},
                                             {5, 6, 7, 8}, {1, -1, 1, -1});
    const BalanceDiagnostics d = balance_diagnostics(ds);
    for (double v : d.values()) CHECK(v == 0.0);
    CHECK_FALSE(d.flagged());
  }

  SUBCASE("fully confounded design is flagged") {
    const PairedDataset ds =
        test::paired_ds({1, 2, 3, 4}, {1, 1, 1, 1}, {5, 6, 7, 8}, {1, 1, 1, 1});
    const BalanceDiagnostics d = balance_diagnostics(ds);
    CHECK(d.s12_p0 == 1.0);
    CHECK(d.flagged());
  }

  SUBCASE("generated four-group partition is exactly balanced") {
    const sim::Designs d = sim::generate_designs(1000, 77);
    std::vector<UnitRecord> rs;
    for (Index i = 0; i < 1000; ++i)
      rs.push_back(rec(std::to_string(i), 1.0, static_cast<int>(d.x1[i]), 2.0,
                       static_cast<int>(d.x2[i])));
    const BalanceDiagnostics diag = balance_diagnostics(validate_dataset(rs));
    for (double v : diag.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("units without outcomes are kept but never estimated from") {
  const PairedDataset base = test::paired_ds({2, 2, 0, 0}, {1, 1, -1, -1},
                                             {1, 0, 1, 0}, {1, -1, 1, -1});
  std::vector<UnitRecord> with_extra = base.records();
  with_extra.push_back(rec("ghost1", std::nullopt, 1, std::nullopt, -1));
  with_extra.push_back(rec("ghost2", std::nullopt, -1, std::nullopt, 1));
  const PairedDataset ds = validate_dataset(with_extra);
  CHECK(ds.counts().n_ignored == 2);

  const VarianceComponents vc = test::vc_of(1, 1, 1);
  CHECK(single_estimate(ds, 1, vc).value ==
        doctest::Approx(single_estimate(base, 1, vc).value).epsilon(1e-15));
  CHECK(paired_estimate(ds, vc).beta1 ==
        doctest::Approx(paired_estimate(base, vc).beta1).epsilon(1e-15));
}
