#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/builders.hpp"
#include "rankproc/analysis.hpp"
#include "rankproc/errors.hpp"
#include "rankproc/process.hpp"

using namespace rankproc;
using testing_support::deterministic_pair;

namespace {

std::vector<double> q_of(const ProcessSpec& spec, std::vector<int> pos) {
  return spec.distribution(Ranking(std::move(pos))).mean();
}

double atom_prob(const DiscreteVectorDistribution& dist, const std::vector<double>& v) {
  for (std::size_t k = 0; k < dist.atom_count(); ++k) {
    const auto a = dist.atom(k);
    if (std::equal(a.begin(), a.end(), v.begin(), v.end())) return dist.prob(k);
  }
  return 0.0;
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("step follows the ranking of the current state") {
  const auto spec = deterministic_pair({0, 0});
  Rng rng(1);
  CHECK(step(spec, std::vector<double>{0, 0}, rng) == std::vector<double>{0, 1});
  CHECK(step(spec, std::vector<double>{1, 0}, rng) == std::vector<double>{2, 0});

  Rng a(5), b(99);
  CHECK(step(spec, std::vector<double>{3, 1}, a) == step(spec, std::vector<double>{3, 1}, b));
  CHECK(a() == Rng(5)());
}

TEST_CASE("kernel lookup is space homogeneous") {
  const auto spec = testing_support::counterexample_triple({2, 1, 0});
  CHECK(&kernel_distribution(spec, std::vector<double>{3, 1, 0}) ==
        &spec.distribution(Ranking::identity(3)));
  CHECK(&kernel_distribution(spec, std::vector<double>{1, 1, 0}) ==
        &spec.distribution(Ranking({1, 1, 3})));
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> v(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x{double(v(gen)), double(v(gen)), double(v(gen))};
    std::vector<double> y(x);
    for (auto& e : y) e = 3 * e - 7;
    CHECK(&kernel_distribution(spec, x) == &kernel_distribution(spec, y));
  }
}

TEST_CASE("table specs must cover every ranking") {
  std::map<Ranking, IncrementLaw> table;
  table.emplace(Ranking({1, 2}), DiscreteVectorDistribution::point_mass({1, 0}));
  table.emplace(Ranking({2, 1}), DiscreteVectorDistribution::point_mass({0, 1}));
  CHECK_THROWS_AS(ProcessSpec::from_table(2, table, DiscreteVectorDistribution::zeros(2)),
                  InputError);
}

TEST_CASE("additive urn probabilities") {
  const std::vector<double> a{1, 1}, lambda{2, 1};
  const auto spec = build_additive_urn(a, lambda);
  CHECK(spec.model() == "additive_urn");
  const auto id = q_of(spec, {1, 2});
  CHECK(id[0] == doctest::Approx(0.6));
  CHECK(id[1] == doctest::Approx(0.4));
  const auto swapped = q_of(spec, {2, 1});
  CHECK(swapped[0] == doctest::Approx(0.4));
  CHECK(swapped[1] == doctest::Approx(0.6));
  const auto tie = q_of(spec, {1, 1});
  CHECK(tie[0] == doctest::Approx(0.5));
  CHECK(tie[1] == doctest::Approx(0.5));
  CHECK(spec.initial() == DiscreteVectorDistribution::zeros(2));
}

TEST_CASE("additive urn validation") {
  const std::vector<double> a{1, 1};
  CHECK_THROWS_AS(build_additive_urn(a, std::vector<double>{1, 1}), InputError);
  CHECK_THROWS_AS(build_additive_urn(a, std::vector<double>{1, 2}), InputError);
  CHECK_THROWS_AS(build_additive_urn(a, std::vector<double>{1, -1}), InputError);
  CHECK_THROWS_AS(build_additive_urn(std::vector<double>{-1, 1}, std::vector<double>{2, 1}),
                  InputError);
  CHECK_THROWS_AS(build_additive_urn(std::vector<double>{0}, std::vector<double>{0}),
                  InputError);
  CHECK_THROWS_AS(build_additive_urn(a, std::vector<double>{2, 1, 0}), InputError);
}

TEST_CASE("additive urn properties on random inputs") {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_int_distribution<int> small(0, 3);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = dim(gen);
    std::vector<double> a(static_cast<std::size_t>(d)), lambda(static_cast<std::size_t>(d));
    for (auto& v : a) v = small(gen);
    double level = small(gen);
    for (int k = d - 1; k >= 0; --k) {
      lambda[static_cast<std::size_t>(k)] = level;
      level += 1 + small(gen);
    }
    double total_a = 0;
    for (double v : a) total_a += v;
    if (total_a == 0 && lambda.back() == 0) a[0] = 1;

    const auto spec = build_additive_urn(a, lambda);
    const double min_a = *std::min_element(a.begin(), a.end());
    for (const auto& r : spec.rankings().rankings()) {
      const auto& dist = spec.distribution(r);
      const auto q = dist.mean();
      double sum = 0;
      for (double v : q) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t i = 0; i < q.size(); ++i) {
        std::vector<double> e(q.size(), 0.0);
        e[i] = 1.0;
        CHECK((atom_prob(dist, e) > 0) == (q[i] > 0));
        if (lambda.back() > 0 || min_a > 0) CHECK(q[i] > 0);
      }
    }
    CHECK(check_reinforcement_assumption(spec).ordering_assumption_satisfied);
    CHECK(is_polya_urn(spec));
  }
}

TEST_CASE("click model probabilities") {
  const std::vector<double> u{0.8, 0.5};
  const auto spec = build_click_model(u, positional_examination({0.6, 0.3}));
  CHECK(spec.model() == "click");
  const auto& first = spec.distribution(Ranking({1, 2}));
  CHECK(first.atom_count() == 4);
  const auto q1 = first.mean();
  CHECK(q1[0] == doctest::Approx(0.48));
  CHECK(q1[1] == doctest::Approx(0.15));
  CHECK(atom_prob(first, {1, 1}) == doctest::Approx(0.072));
  const auto q2 = q_of(spec, {2, 1});
  CHECK(q2[0] == doctest::Approx(0.24));
  CHECK(q2[1] == doctest::Approx(0.30));
  const auto tie = q_of(spec, {1, 1});
  CHECK(tie[0] == doctest::Approx(0.45 * 0.8));
  CHECK(tie[1] == doctest::Approx(0.45 * 0.5));
  for (const auto& r : spec.rankings().rankings()) {
    const auto q = spec.distribution(r).mean();
    CHECK(atom_prob(spec.distribution(r), {0, 0}) ==
          doctest::Approx((1 - q[0]) * (1 - q[1])));
  }
  CHECK_FALSE(spec.notes().empty());
}

TEST_CASE("click model validation") {
  const std::vector<double> u{0.8, 0.5};
  CHECK_THROWS_AS(build_click_model(std::vector<double>{1.0, 0.5},
                                    positional_examination({0.6, 0.3})),
                  InputError);
  CHECK_THROWS_AS(positional_examination({0.3, 0.6}), InputError);
  CHECK_THROWS_AS(
      build_click_model(u, [](const Ranking&, std::size_t) { return 0.5; }), InputError);
  const std::vector<double> wide(15, 0.5);
  std::vector<double> slots;
  for (int k = 0; k < 15; ++k) slots.push_back(0.9 - 0.05 * k);
  CHECK_THROWS_AS(build_click_model(wide, positional_examination(slots)), CapacityError);
  slots.resize(7);
  CHECK_THROWS_AS(build_click_model(std::vector<double>(7, 0.5), positional_examination(slots)),
                  CapacityError);
}

TEST_CASE("click model properties on random inputs") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 3;
    std::vector<double> u(static_cast<std::size_t>(d)), slots(static_cast<std::size_t>(d));
    for (auto& v : u) v = unit(gen);
    for (auto& v : slots) v = unit(gen);
    std::sort(slots.rbegin(), slots.rend());
    if (std::adjacent_find(slots.begin(), slots.end()) != slots.end()) continue;
    const auto spec = build_click_model(u, positional_examination(slots));
    CHECK(check_reinforcement_assumption(spec).ordering_assumption_satisfied);
    CHECK(check_reachability_condition(spec).holds);
    CHECK_FALSE(is_polya_urn(spec));
  }
}

TEST_CASE("integer states stay integer") {
  const std::vector<double> a{1, 2, 0}, lambda{3, 1, 0};
  const auto spec = build_additive_urn(a, lambda);
  const auto pair = testing_support::counterexample_triple({2, 1, 0});
  Rng rng(4);
  for (const auto* s : {&spec, &pair}) {
    std::vector<double> x = s->initial().sample(rng);
    for (int n = 0; n < 2000; ++n) {
      const auto& law = kernel_distribution(*s, x);
      const auto next = step(*s, x, rng);
      std::vector<double> inc(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        inc[i] = next[i] - x[i];
        CHECK(next[i] == std::floor(next[i]));
      }
      CHECK(atom_prob(law, inc) > 0);
      x = next;
    }
  }
}

TEST_CASE("lint flags inexact values") {
  const auto clean = build_additive_urn(std::vector<double>{1, 1}, std::vector<double>{2, 1});
  CHECK(lint_spec(clean).empty());
  const auto noisy = testing_support::constant_spec(
      DiscreteVectorDistribution::point_mass({0.1, 0.2}), DiscreteVectorDistribution::zeros(2));
  CHECK_FALSE(lint_spec(noisy).empty());
}

TEST_CASE("digest identifies the process") {
  const auto a = build_additive_urn(std::vector<double>{1, 1}, std::vector<double>{2, 1});
  const auto b = build_additive_urn(std::vector<double>{1, 1}, std::vector<double>{2, 1});
  const auto c = build_additive_urn(std::vector<double>{1, 1}, std::vector<double>{3, 1});
  CHECK(spec_digest(a) == spec_digest(b));
  CHECK(spec_digest(a) != spec_digest(c));
  CHECK(spec_digest(a) != spec_digest(a.with_initial(DiscreteVectorDistribution::point_mass({1, 0}))));
  CHECK(spec_digest(a).size() == 16);
}

}
