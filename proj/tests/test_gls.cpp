#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "pairab/estimators.hpp"
#include "pairab/gls.hpp"

using namespace pairab;

TEST_CASE("constants at unit components") {
  const GlsConstants k = gls_constants(test::vc_of(1, 1, 1));
  CHECK(k.a == doctest::Approx(2.0 / 3));
  CHECK(k.b == doctest::Approx(0.5));
  CHECK(k.c == doctest::Approx(2.0 / 3));
  CHECK(k.d == doctest::Approx(0.5));
  CHECK(k.e == doctest::Approx(-1.0 / 3));
}

TEST_CASE("constants stay in their sign ranges") {
  rng::Stream s(11);
  for (int trial = 0; trial < 200; ++trial) {
    const GlsConstants k = gls_constants(test::vc_of(
        5 * s.uniform(), 3 * s.uniform() + 1e-6, 3 * s.uniform() + 1e-6));
    CHECK(k.a > 0);
    CHECK(k.b > 0);
    CHECK(k.c > 0);
    CHECK(k.d > 0);
    CHECK(k.e <= 0);
  }
}

TEST_CASE("noiseless data is interpolated for any components") {
  // eps = 0, full pairing, user effects drawn but replicated across the four
  // design groups so they cannot leak into the treatment contrasts: the beta
  // block is exact no matter which positive components weight the fit, and
  // the intercepts absorb the mean effect.
  const Index per_group = 10;
  const Index n = 4 * per_group;
  rng::Stream s(6);
  std::vector<double> draws(per_group);
  double u_mean = 0;
  for (Index j = 0; j < per_group; ++j) {
    draws[static_cast<std::size_t>(j)] = s.normal();
    u_mean += draws[static_cast<std::size_t>(j)];
  }
  u_mean /= static_cast<double>(per_group);

  std::vector<double> y1(n), y2(n);
  std::vector<int> x1(n), x2(n);
  for (Index i = 0; i < n; ++i) {
    const Index g = i / per_group;
    const double u = draws[static_cast<std::size_t>(i % per_group)];
    x1[i] = g < 2 ? 1 : -1;
    x2[i] = g % 2 == 0 ? 1 : -1;
    y1[i] = u + 0.4 + 1.7 * x1[i];
    y2[i] = u - 0.3 + 0.9 * x2[i];
  }
  const PairedDataset ds = test::paired_ds(y1, x1, y2, x2);
  for (const auto& vc : {test::vc_of(1, 1, 1), test::vc_of(4, 0.5, 2)}) {
    const GlsSolution g = gls_partial(ds, vc);
    CHECK(g.beta(1) == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(g.beta(2) == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(g.alpha(1) == doctest::Approx(0.4 + u_mean).epsilon(1e-9));
    CHECK(g.alpha(2) == doctest::Approx(-0.3 + u_mean).epsilon(1e-9));
  }
}

TEST_CASE("closed form matches the dense oracle on random partial instances") {
  rng::Stream seeds(2468);
  for (int trial = 0; trial < 20; ++trial) {
    const VarianceComponents vc =
        test::vc_of(4 * seeds.uniform() + 0.02, 2 * seeds.uniform() + 0.05,
                    2 * seeds.uniform() + 0.05);
    const Index n = 40 + static_cast<Index>(seeds.below(160));
    const double rate = 0.4 * seeds.uniform();
    const PairedDataset ds = test::random_instance(n, vc, rate, seeds.next_u64());

    const GlsSolution fast = gls_partial(ds, vc);
    const GlsSolution dense = brute_force_gls(ds, vc);
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(fast.theta[j] - dense.theta[j]) <=
            1e-8 * (1 + std::abs(dense.theta[j])));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        CHECK(std::abs(fast.covariance(r, c) - dense.covariance(r, c)) <=
              1e-8 * (1 + std::abs(dense.covariance(r, c))));
  }
}

TEST_CASE("tau2 = 0 reduces to two independent least squares fits") {
  const VarianceComponents vc = test::vc_of(0, 1.2, 0.8);
  const PairedDataset ds = test::random_instance(120, test::vc_of(1, 1, 1), 0.2, 99);
  const GlsSolution g = brute_force_gls(ds, vc);

  // Experiment 1 alone: OLS of available y1 on (1, x1).
  std::vector<Index> avail = ds.p0();
  avail.insert(avail.end(), ds.p1().begin(), ds.p1().end());
  Eigen::MatrixXd X(static_cast<Index>(avail.size()), 2);
  Eigen::VectorXd y(static_cast<Index>(avail.size()));
  for (std::size_t r = 0; r < avail.size(); ++r) {
    X(static_cast<Index>(r), 0) = 1.0;
    X(static_cast<Index>(r), 1) = ds.x1()[avail[r]];
    y[static_cast<Index>(r)] = ds.y1()[avail[r]];
  }
  const Eigen::VectorXd ols = test::least_squares(X, y);
  CHECK(g.alpha(1) == doctest::Approx(ols[0]).epsilon(1e-9));
  CHECK(g.beta(1) == doctest::Approx(ols[1]).epsilon(1e-9));
}

TEST_CASE("full pairing with orthogonal designs equals the closed-form combination") {
  const VarianceComponents vc = test::vc_of(2.5, 1.1, 0.9);
  const PairedDataset ds = test::orthogonal_instance(96, vc, 31);
  const GlsSolution g = brute_force_gls(ds, vc);
  const auto [c1, c2] = collaborative_estimate(ds, vc);
  CHECK(g.beta(1) == doctest::Approx(c1.estimate).epsilon(1e-10));
  CHECK(g.beta(2) == doctest::Approx(c2.estimate).epsilon(1e-10));
}

TEST_CASE("beta block of the normal equations under exact orthogonality") {
  const VarianceComponents vc = test::vc_of(1.5, 0.8, 1.2);
  const GlsConstants k = gls_constants(vc);
  const PairedDataset full = test::orthogonal_instance(64, vc, 12);
  const GlsSolution g = gls_partial(full, vc);
  // Covariance inverse diagonal: Var(beta_k) = 1 / (a n0 + b n1), n1 = 0.
  const double n0 = 64;
  CHECK(g.beta_variance(1) == doctest::Approx(1.0 / (k.a * n0)).epsilon(1e-10));
  CHECK(g.beta_variance(2) == doctest::Approx(1.0 / (k.c * n0)).epsilon(1e-10));
}

TEST_CASE("residuals are V-inverse orthogonal to the design") {
  const VarianceComponents vc = test::vc_of(2, 1, 1);
  const PairedDataset ds = test::random_instance(100, vc, 0.3, 55);
  const GlsSolution g = gls_partial(ds, vc);

  // Rebuild the dense pieces and check X' V^-1 (y - X theta) = 0.
  const PanelCounts c = ds.counts();
  const Index total = 2 * c.n0 + c.n1 + c.n2;
  Eigen::VectorXd y(total);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(total, 4);
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(total, total);
  Index row = 0;
  for (Index i : ds.p0()) {
    y[row] = ds.y1()[i];
    X(row, 0) = 1;
    X(row, 2) = ds.x1()[i];
    V(row, row) = vc.sigma1_2 + vc.tau2;
    ++row;
  }
  for (Index i : ds.p1()) {
    y[row] = ds.y1()[i];
    X(row, 0) = 1;
    X(row, 2) = ds.x1()[i];
    V(row, row) = vc.sigma1_2 + vc.tau2;
    ++row;
  }
  Index pair = 0;
  for (Index i : ds.p0()) {
    y[row] = ds.y2()[i];
    X(row, 1) = 1;
    X(row, 3) = ds.x2()[i];
    V(row, row) = vc.sigma2_2 + vc.tau2;
    V(row, pair) = vc.tau2;
    V(pair, row) = vc.tau2;
    ++row;
    ++pair;
  }
  for (Index i : ds.p2()) {
    y[row] = ds.y2()[i];
    X(row, 1) = 1;
    X(row, 3) = ds.x2()[i];
    V(row, row) = vc.sigma2_2 + vc.tau2;
    ++row;
  }
  const Eigen::VectorXd resid = y - X * g.theta;
  const Eigen::Vector4d grad = X.transpose() * V.ldlt().solve(resid);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(grad[j]) < 1e-8);
}

TEST_CASE("confounded designs are rejected loudly") {
  // x1 constant at +1: alpha1 and beta1 are not separable.
  std::vector<UnitRecord> rs;
  for (int i = 0; i < 12; ++i)
    rs.push_back(test::rec(std::to_string(i), 1.0 * i, 1, 0.5 * i, i % 2 ? 1 : -1));
  const PairedDataset ds = validate_dataset(rs);
  CHECK_THROWS_WITH_AS(gls_partial(ds, test::vc_of(1, 1, 1)),
                       doctest::Contains("SingularNormalEquations"), Error);
  CHECK_THROWS_AS(brute_force_gls(ds, test::vc_of(1, 1, 1)), Error);
}

TEST_CASE("dense oracle size guard") {
  const PairedDataset ds = test::orthogonal_instance(2504, test::vc_of(1, 1, 1), 2);
  CHECK_THROWS_WITH_AS(brute_force_gls(ds, test::vc_of(1, 1, 1)),
                       doctest::Contains("SizeGuardExceeded"), Error);
}

TEST_CASE("asymptotic variance limits") {
  SUBCASE("full pairing, unit components") {
    const auto [v1, v2] = gls_asymptotic_variance(test::vc_of(1, 1, 1), 1, 0, 0);
    CHECK(v1 == doctest::Approx(1.5));
    CHECK(v2 == doctest::Approx(1.5));
  }
  SUBCASE("tau2 to zero recovers the single-analysis limit") {
    const double r0 = 0.6, r1 = 0.3;
    const auto [v1, v2] = gls_asymptotic_variance(test::vc_of(0, 1.3, 0.9), r0, r1, 0.2);
    CHECK(v1 == doctest::Approx(1.3 / (r0 + r1)).epsilon(1e-9));
    (void)v2;
  }
  SUBCASE("matches the empirical variance of the closed-form fit") {
    // Missingness at rate 0.3: r0 = 0.49, r1 = r2 = 0.21.
    const int reps = 3000;
    sim::SimulationConfig config;
    config.n = 4000;
    config.tau = 2.0;
    config.missing_rate = 0.3;
    config.base_seed = 31337;
    const VarianceComponents vc = test::vc_of(4, 1, 1);
    std::vector<double> betas(reps);
    for (int r = 0; r < reps; ++r) {
      auto [po, full] = sim::generate_outcomes(config, r);
      const PairedDataset ds = sim::apply_missingness(
          full, 0.3,
          rng::derive_seed(config.base_seed, static_cast<std::uint64_t>(r),
                           static_cast<std::uint64_t>(rng::Purpose::missingness)));
      betas[static_cast<std::size_t>(r)] = gls_partial(ds, vc).beta(1);
    }
    const double empirical = 4000.0 * test::sample_variance(betas);
    const auto [v1, v2] = gls_asymptotic_variance(vc, 0.49, 0.21, 0.21);
    CHECK(empirical == doctest::Approx(v1).epsilon(0.05));
    (void)v2;
  }
}
