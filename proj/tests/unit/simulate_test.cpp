#include <doctest.h>

#include <cmath>

#include "../support/builders.hpp"
#include "rankproc/config.hpp"
#include "rankproc/errors.hpp"
#include "rankproc/simulate.hpp"

using namespace rankproc;
using testing_support::deterministic_pair;

TEST_SUITE("simulate") {

TEST_CASE("two-item example from the tie") {
  const auto r = run(deterministic_pair({0, 0}), 100, 10, 1);
  REQUIRE(r.settled_ranking.has_value());
  CHECK(*r.settled_ranking == Ranking({2, 1}));
  CHECK(r.final_state == std::vector<double>{0, 100});
  CHECK(r.last_change_step == 1);
}

TEST_CASE("two-item example from the lead") {
  const auto r = run(deterministic_pair({1, 0}), 100, 10, 1);
  REQUIRE(r.settled_ranking.has_value());
  CHECK(*r.settled_ranking == Ranking::identity(2));
  CHECK(r.final_state == std::vector<double>{101, 0});
  CHECK(r.last_change_step == 0);
}

TEST_CASE("ranking-preserving increments never change the ranking") {
  const auto spec = testing_support::constant_spec(DiscreteVectorDistribution::point_mass({2, 1, 0}),
                                                   DiscreteVectorDistribution::point_mass({5, 3, 1}));
  const auto r = run(spec, 50, 5, 3);
  CHECK(r.last_change_step == 0);
  CHECK(*r.settled_ranking == Ranking({1, 2, 3}));
}

TEST_CASE("run arguments") {
  const auto spec = deterministic_pair({0, 0});
  CHECK_THROWS_AS(run(spec, 10, 0, 1), InputError);
  CHECK_THROWS_AS(run(spec, 10, 11, 1), InputError);
  CHECK_NOTHROW(run(spec, 10, 10, 1));
  CHECK(default_window(100000) == 10000);
  CHECK(default_window(5) == 1);
}

TEST_CASE("unsettled runs") {
  // Alternates the leader every step.
  std::vector<IncrementLaw> laws;
  for (const auto& r : enumerate_rankings(2)) {
    laws.emplace_back(DiscreteVectorDistribution::point_mass(
        r == Ranking({1, 2}) ? std::vector<double>{0, 2} : std::vector<double>{2, 0}));
  }
  const ProcessSpec spec(std::move(laws), DiscreteVectorDistribution::point_mass({1, 0}));
  const auto r = run(spec, 100, 10, 1);
  CHECK_FALSE(r.settled_ranking.has_value());
  CHECK(r.last_change_step == 100);
}

TEST_CASE("normalized state") {
  const auto urn = build_additive_urn(std::vector<double>{1, 1, 1}, std::vector<double>{3, 2, 1});
  const auto r = run(urn, 777, 70, 9);
  const auto x = r.normalized_state();
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i] * 777 == doctest::Approx(r.final_state[i]).epsilon(1e-15));
  }
}

TEST_CASE("urn adds exactly one ball per step") {
  const auto urn = build_additive_urn(std::vector<double>{1, 2, 0}, std::vector<double>{3, 2, 1})
                       .with_initial(DiscreteVectorDistribution::point_mass({4, 0, 1}));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = run(urn, 1000, 100, seed);
    double total = 0;
    for (double v : r.final_state) total += v;
    CHECK(total - 5 == 1000);
  }
}

TEST_CASE("trace records every ranking change") {
  const auto urn = build_additive_urn(std::vector<double>{1, 1, 1}, std::vector<double>{3, 2, 1});
  const auto traced = run(urn, 2000, 200, 4, RunOptions{true});
  const auto plain = run(urn, 2000, 200, 4);
  CHECK(traced.final_state == plain.final_state);
  REQUIRE_FALSE(traced.trace.empty());
  CHECK(traced.trace.front().step == 0);
  CHECK(traced.trace.front().ranking == Ranking({1, 1, 1}));
  CHECK(traced.trace.back().step == traced.last_change_step);
  for (std::size_t k = 1; k < traced.trace.size(); ++k) {
    CHECK(traced.trace[k].step > traced.trace[k - 1].step);
    CHECK(traced.trace[k].ranking != traced.trace[k - 1].ranking);
  }
}

TEST_CASE("settling is monotone in the window") {
  const auto urn = build_additive_urn(std::vector<double>{1, 1, 1}, std::vector<double>{3, 2, 1});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto wide = run(urn, 3000, 1000, seed);
    for (std::int64_t w : {1, 10, 100, 500}) {
      const auto narrow = run(urn, 3000, w, seed);
      if (wide.settled_ranking) CHECK(narrow.settled_ranking == wide.settled_ranking);
      CHECK(narrow.final_state == wide.final_state);
    }
  }
}

TEST_CASE("ensembles do not depend on the worker count") {
  const auto urn = build_additive_urn(std::vector<double>{1, 1, 1}, std::vector<double>{3, 2, 1});
  EnsembleRequest req{64, 2000, 200, 17, 1, false};
  const auto one = io::to_json(ensemble(urn, req)).dump();
  req.workers = 8;
  const auto eight = io::to_json(ensemble(urn, req)).dump();
  CHECK(one == eight);

  req.runs = 1;
  const auto single = ensemble(urn, req);
  const auto direct = run(urn, 2000, 200, derive_seed(17, 0));
  CHECK(single.runs[0].final_state == direct.final_state);
  CHECK(single.runs[0].seed == derive_seed(17, 0));

  req.runs = 0;
  CHECK_THROWS_AS(ensemble(urn, req), InputError);
}

TEST_CASE("worker failures propagate") {
  SamplerLaw bad{1, [](Rng&, std::span<double>) { throw std::runtime_error("boom"); }, "bad"};
  const ProcessSpec spec({IncrementLaw(bad)}, DiscreteVectorDistribution::zeros(1));
  CHECK_THROWS_AS(ensemble(spec, EnsembleRequest{10, 10, 1, 0, 4, false}), std::runtime_error);
}

}
