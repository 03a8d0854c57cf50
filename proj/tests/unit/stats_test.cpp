#include <doctest.h>

#include <cmath>

#include "../support/builders.hpp"
#include "../support/oracles.hpp"
#include "rankproc/errors.hpp"
#include "rankproc/stats.hpp"

using namespace rankproc;

namespace {

ProcessSpec symmetric_urn() {
  return build_additive_urn(std::vector<double>{1, 1, 1}, std::vector<double>{3, 2, 1});
}

DiscreteVectorDistribution scalar(std::vector<std::pair<double, double>> atoms) {
  std::vector<Atom> out;
  for (auto [v, p] : atoms) out.push_back({{v}, p});
  return DiscreteVectorDistribution(1, out);
}

std::size_t first_regime(std::span<const double>) { return 0; }

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("limit frequencies on the deterministic example") {
  const auto spec = testing_support::deterministic_pair({0, 0});
  const auto ens = ensemble(spec, {100, 1000, 100, 1, 1, false});
  const auto terminal = terminal_rankings(spec);
  const auto report = limit_ranking_distribution(ens, terminal);
  REQUIRE(report.frequencies.size() == 1);
  CHECK(report.frequencies[0].ranking == Ranking({2, 1}));
  CHECK(report.frequencies[0].frequency == 1.0);
  CHECK(report.anomalies.empty());
  const auto slln = slln_check(ens, terminal, spec);
  REQUIRE(slln.size() == 1);
  CHECK(slln[0].max_error == 0.0);
  CHECK_THROWS_AS(limit_ranking_distribution(EnsembleSummary{}, terminal), InputError);
}

TEST_CASE("constant increments: mean error is the start divided by N") {
  const auto spec = testing_support::constant_spec(
      DiscreteVectorDistribution::point_mass({2, 1}), DiscreteVectorDistribution::point_mass({6, 0}));
  const auto ens = ensemble(spec, {5, 300, 30, 2, 1, false});
  const auto slln = slln_check(ens, terminal_rankings(spec), spec);
  REQUIRE(slln.size() == 1);
  CHECK(slln[0].max_error == doctest::Approx(6.0 / 300).epsilon(1e-12));
}

TEST_CASE("symmetric urn: frequencies agree across colors") {
  const auto spec = symmetric_urn();
  const auto ens = ensemble(spec, {1200, 5000, 500, 5, 1, false});
  const auto report = limit_ranking_distribution(ens, terminal_rankings(spec));
  REQUIRE(report.frequencies.size() == 6);
  CHECK(report.anomalies.empty());
  const double n = static_cast<double>(report.total_runs);
  for (const auto& a : report.frequencies) {
    for (const auto& b : report.frequencies) {
      const double pooled = (a.frequency + b.frequency) / 2;
      const double se = std::sqrt(2 * pooled * (1 - pooled) / n);
      CHECK(std::abs(a.frequency - b.frequency) <= 4 * se);
    }
  }
}

TEST_CASE("mean error shrinks with the horizon") {
  const auto spec = symmetric_urn();
  const auto terminal = terminal_rankings(spec);
  auto worst = [&](std::int64_t n) {
    const auto ens = ensemble(spec, {400, n, n / 10, 8, 1, false});
    double e = 0;
    for (const auto& s : slln_check(ens, terminal, spec)) e = std::max(e, s.max_error);
    return e;
  };
  CHECK(worst(10000) < worst(1000));
}

TEST_CASE("KS statistic") {
  CHECK(ks_statistic({0.0}, normal_cdf) == doctest::Approx(0.5));
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic({0.25, 0.75}, uniform) == doctest::Approx(0.25));
  CHECK(ks_statistic({0.1, 0.2, 0.3}, uniform) == doctest::Approx(0.7));
  CHECK(ks_critical_value(100) == doctest::Approx(0.136));
  CHECK(normal_cdf(0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK_THROWS_AS(ks_statistic({}, normal_cdf), InputError);
}

TEST_CASE("KS self test rejects at the nominal rate") {
  // At a 5% level the rejection count over 100 seeds is Binomial(100, 0.05);
  // more than 11 rejections has probability below 0.5%.
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (clt_self_test(500, seed) > ks_critical_value(500)) ++rejected;
  }
  CHECK(rejected <= 11);
  CHECK(clt_self_test(2000, 123) <= ks_critical_value(2000));
}

TEST_CASE("CLT check preconditions") {
  const auto spec = testing_support::deterministic_pair({0, 0});
  const auto ens = ensemble(spec, {300, 100, 10, 1, 1, false});
  CHECK_THROWS_AS(clt_check(ens, Ranking({2, 1}), 0, spec), DegenerateError);

  const auto urn = symmetric_urn();
  const auto small = ensemble(urn, {50, 1000, 100, 1, 1, false});
  CHECK_THROWS_AS(clt_check(small, Ranking({1, 2, 3}), 0, urn), InputError);
}

TEST_CASE("verify report") {
  const auto spec = symmetric_urn();
  const auto ens = ensemble(spec, {1500, 20000, 2000, 12, 1, false});
  const auto report = verify_limit_laws(ens, spec, terminal_rankings(spec));
  CHECK(report.anomalies.empty());
  CHECK(report.slln.size() == 6);
  CHECK(report.ks.size() == 18);
  for (const auto& s : report.slln) CHECK(s.max_error <= 0.02);
}

TEST_CASE("estimates") {
  const auto e = make_estimate(30, 120);
  CHECK(e.value == 0.25);
  CHECK(e.standard_error == doctest::Approx(std::sqrt(0.25 * 0.75 / 120)));
  CHECK(make_estimate(0, 0).value == 0.0);
}

TEST_CASE("order persistence") {
  const auto urn = build_additive_urn(std::vector<double>{2, 1}, std::vector<double>{2, 1});
  PersistenceRequest req{0, 1, 1.0, 2000, 3, 1};
  const std::int64_t horizons[] = {1, 10, 100, 1000};
  const auto curve = order_persistence_curve(urn, req, horizons);
  CHECK(curve.precondition_met);
  for (std::size_t k = 1; k < curve.estimates.size(); ++k) {
    CHECK(curve.estimates[k].successes <= curve.estimates[k - 1].successes);
  }
  // separate calls with the same seed family nest the same way
  CHECK(order_persistence_estimate(urn, req, 1000).estimates[0].successes <=
        order_persistence_estimate(urn, req, 100).estimates[0].successes);
  CHECK(order_persistence_estimate(urn, req, 1000).estimates[0].successes ==
        curve.estimates.back().successes);

  const auto sure = testing_support::constant_spec(DiscreteVectorDistribution::point_mass({1, 0}),
                                                   DiscreteVectorDistribution::zeros(2));
  CHECK(order_persistence_estimate(sure, req, 500).estimates[0].value == 1.0);

  req.initial_gap = 1000.0;
  CHECK(order_persistence_estimate(urn, req, 999).estimates[0].value == 1.0);

  PersistenceRequest backwards{1, 0, 1.0, 10, 3, 1};
  CHECK_FALSE(order_persistence_estimate(urn, backwards, 10).precondition_met);

  req.initial_gap = 0.0;
  CHECK_THROWS_AS(order_persistence_estimate(urn, req, 10), InputError);
}

TEST_CASE("walk survival matches exact enumeration") {
  const std::vector<DiscreteVectorDistribution> regimes{scalar({{1, 0.6}, {-1, 0.4}})};
  std::vector<std::int64_t> horizons;
  for (int n = 1; n <= 16; ++n) horizons.push_back(n);
  const auto curve = walk_survival_curve(regimes, first_regime, horizons, 40000, 5);
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    const double exact = oracle::exact_walk_survival(0.6, static_cast<int>(horizons[k]));
    CHECK(std::abs(curve[k].value - exact) <= 4 * std::sqrt(exact * (1 - exact) / 40000) + 1e-12);
  }
  CHECK(oracle::exact_walk_survival(0.6, 1) == doctest::Approx(0.6));
  CHECK(oracle::exact_walk_survival(0.6, 2) == doctest::Approx(0.6));
  CHECK(oracle::exact_walk_survival(0.6, 3) == doctest::Approx(0.6 * 0.6 + 0.6 * 0.4 * 0.6));
}

TEST_CASE("walk survival edge cases") {
  const std::vector<DiscreteVectorDistribution> zero{DiscreteVectorDistribution::zeros(1)};
  CHECK(walk_survival_estimate(zero, first_regime, 100, 50, 1).value == 1.0);

  const std::vector<DiscreteVectorDistribution> drifting_down{scalar({{1, 0.4}, {-1, 0.6}})};
  CHECK_THROWS_AS(walk_survival_estimate(drifting_down, first_regime, 10, 10, 1), InputError);
  const std::vector<DiscreteVectorDistribution> centered{scalar({{1, 0.5}, {-1, 0.5}})};
  CHECK_THROWS_AS(walk_survival_estimate(centered, first_regime, 10, 10, 1), InputError);
  const std::vector<DiscreteVectorDistribution> wide{DiscreteVectorDistribution::zeros(2)};
  CHECK_THROWS_AS(walk_survival_estimate(wide, first_regime, 10, 10, 1), InputError);

  const std::vector<DiscreteVectorDistribution> ok{scalar({{1, 0.6}, {-1, 0.4}})};
  const auto out_of_range = [](std::span<const double>) -> std::size_t { return 3; };
  CHECK_THROWS_AS(walk_survival_estimate(ok, out_of_range, 10, 10, 1), InputError);
  const std::int64_t unsorted[] = {10, 5};
  CHECK_THROWS_AS(walk_survival_curve(ok, first_regime, unsorted, 10, 1), InputError);
}

TEST_CASE("walk survival does not depend on the worker count") {
  const std::vector<DiscreteVectorDistribution> regimes{scalar({{1, 0.75}, {-1, 0.25}}),
                                                        scalar({{2, 0.5}, {-1, 0.5}})};
  const auto parity = [](std::span<const double> path) { return (path.size() - 1) % 2; };
  const std::int64_t horizons[] = {100, 1000};
  const auto a = walk_survival_curve(regimes, parity, horizons, 3000, 8, 1);
  const auto b = walk_survival_curve(regimes, parity, horizons, 3000, 8, 3);
  for (std::size_t k = 0; k < 2; ++k) CHECK(a[k].successes == b[k].successes);
}

}
