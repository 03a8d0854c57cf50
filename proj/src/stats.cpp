#include "rankproc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "rankproc/errors.hpp"
#include "rankproc/parallel.hpp"
#include "rankproc/random.hpp"

namespace rankproc {

LimitLawReport limit_ranking_distribution(const EnsembleSummary& ensemble,
                                          const TerminalReport& terminal) {
  if (ensemble.runs.empty()) throw InputError("ensemble has no runs");
  LimitLawReport report;
  report.total_runs = static_cast<std::int64_t>(ensemble.runs.size());
  std::map<Ranking, std::int64_t> counts;
  for (const auto& run : ensemble.runs) {
    if (run.settled_ranking) {
      ++counts[*run.settled_ranking];
    } else {
      ++report.undetermined;
    }
  }
  const auto total = static_cast<double>(report.total_runs);
  for (const auto& [r, c] : counts) {
    RankingFrequency f{r, c, static_cast<double>(c) / total, terminal.contains(r)};
    report.frequencies.push_back(f);
    if (!f.terminal) report.anomalies.push_back(f);
  }
  report.undetermined_fraction = static_cast<double>(report.undetermined) / total;
  return report;
}

std::vector<SllnEntry> slln_check(const EnsembleSummary& ensemble,
                                  const TerminalReport& terminal, const ProcessSpec& spec) {
  std::map<Ranking, std::pair<std::int64_t, std::vector<double>>> sums;
  for (const auto& run : ensemble.runs) {
    if (!run.settled_ranking || !terminal.contains(*run.settled_ranking)) continue;
    auto& [count, sum] = sums[*run.settled_ranking];
    if (sum.empty()) sum.assign(run.final_state.size(), 0.0);
    ++count;
    const auto normalized = run.normalized_state();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += normalized[i];
  }
  std::vector<SllnEntry> out;
  for (auto& [r, entry] : sums) {
    auto& [count, sum] = entry;
    SllnEntry e{r, count, sum, spec.distribution(r).mean(), 0.0};
    for (std::size_t i = 0; i < sum.size(); ++i) {
      e.conditional_mean[i] /= static_cast<double>(count);
      e.max_error = std::max(e.max_error, std::abs(e.conditional_mean[i] - e.expected[i]));
    }
    out.push_back(std::move(e));
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InputError("KS statistic needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double f = cdf(samples[k]);
    d = std::max({d, f - static_cast<double>(k) / n, static_cast<double>(k + 1) / n - f});
  }
  return d;
}

double ks_critical_value(std::int64_t n) {
  if (n < 1) throw InputError("KS critical value needs n >= 1");
  return kKsCritical05 / std::sqrt(static_cast<double>(n));
}

double clt_check(const EnsembleSummary& ensemble, const Ranking& r, std::size_t i,
                 const ProcessSpec& spec) {
  if (i >= static_cast<std::size_t>(spec.dimension())) {
    throw InputError("component index out of range");
  }
  const auto& dist = spec.distribution(r);
  const double sigma = dist.stddev(i);
  if (sigma == 0.0) {
    throw DegenerateError("component " + std::to_string(i + 1) + " has zero variance under " +
                          r.to_string());
  }
  const double q = dist.mean()[i];
  std::vector<double> z;
  for (const auto& run : ensemble.runs) {
    if (run.settled_ranking != r) continue;
    const auto n = static_cast<double>(run.horizon);
    z.push_back((run.final_state[i] - n * q) / (std::sqrt(n) * sigma));
  }
  if (static_cast<std::int64_t>(z.size()) < kMinCltRuns) {
    throw InputError("CLT check needs at least " + std::to_string(kMinCltRuns) +
                     " runs settled at " + r.to_string() + ", got " + std::to_string(z.size()));
  }
  return ks_statistic(std::move(z), normal_cdf);
}

double clt_self_test(std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw InputError("self test needs m >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> z(static_cast<std::size_t>(m));
  for (double& v : z) v = normal(rng);
  return ks_statistic(std::move(z), normal_cdf);
}

LimitLawReport verify_limit_laws(const EnsembleSummary& ensemble, const ProcessSpec& spec,
                                 const TerminalReport& terminal, const VerifyOptions& options) {
  auto report = limit_ranking_distribution(ensemble, terminal);
  report.slln = slln_check(ensemble, terminal, spec);
  for (const auto& entry : report.slln) {
    if (entry.runs < options.ks_min_runs) continue;
    const auto& dist = spec.distribution(entry.ranking);
    for (std::size_t i = 0; i < entry.expected.size(); ++i) {
      if (dist.stddev(i) == 0.0) {
        report.notes.push_back("component " + std::to_string(i + 1) + " is deterministic under " +
                               entry.ranking.to_string() + "; CLT check skipped");
        continue;
      }
      KsEntry ks{entry.ranking, i, entry.runs, clt_check(ensemble, entry.ranking, i, spec),
                 ks_critical_value(entry.runs), false};
      ks.pass = ks.statistic <= ks.critical;
      report.ks.push_back(std::move(ks));
    }
  }
  report.notes.push_back(
      "limit laws are conditioned on the finite-horizon settled ranking; tolerances are "
      "empirical budgets");
  return report;
}

Estimate make_estimate(std::int64_t successes, std::int64_t runs) {
  Estimate e{successes, runs, 0.0, 0.0};
  if (runs > 0) {
    e.value = static_cast<double>(successes) / static_cast<double>(runs);
    e.standard_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(runs));
  }
  return e;
}

namespace {

void check_horizons(std::span<const std::int64_t> horizons) {
  if (horizons.empty()) throw InputError("need at least one horizon");
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    if (horizons[k] < 1) throw InputError("horizons must be positive");
    if (k > 0 && horizons[k] <= horizons[k - 1]) {
      throw InputError("horizons must be strictly ascending");
    }
  }
}

// Survivals per horizon from per-run first-failure steps (horizon+1 = never).
std::vector<Estimate> tally(const std::vector<std::int64_t>& first_failure,
                            std::span<const std::int64_t> horizons) {
  std::vector<Estimate> out;
  const auto runs = static_cast<std::int64_t>(first_failure.size());
  for (std::int64_t h : horizons) {
    const auto survived = std::count_if(first_failure.begin(), first_failure.end(),
                                        [h](std::int64_t f) { return f > h; });
    out.push_back(make_estimate(survived, runs));
  }
  return out;
}

}  // namespace

PersistenceCurve order_persistence_curve(const ProcessSpec& spec, const PersistenceRequest& request,
                                         std::span<const std::int64_t> horizons) {
  const auto d = static_cast<std::size_t>(spec.dimension());
  const std::size_t i = request.leader;
  const std::size_t j = request.trailer;
  if (i >= d || j >= d || i == j) throw InputError("persistence needs two distinct components");
  if (!(request.initial_gap > 0.0)) throw InputError("initial gap must be positive");
  if (request.runs < 1) throw InputError("persistence needs at least one run");
  check_horizons(horizons);

  PersistenceCurve curve;
  curve.horizons.assign(horizons.begin(), horizons.end());
  try {
    curve.precondition_met = classify_dominance(spec, i, j) != Dominance::none;
  } catch (const UnsupportedSpecError&) {
    curve.precondition_met = false;
  }

  const std::int64_t last = horizons.back();
  const auto& index = spec.rankings();
  std::vector<std::int64_t> first_failure(static_cast<std::size_t>(request.runs));
  parallel_for(first_failure.size(), request.workers, [&](std::size_t k) {
    Rng rng(derive_seed(request.seed, k));
    auto x = spec.initial().sample(rng);
    x[i] = x[j] + request.initial_gap;
    std::vector<double> scratch(d);
    std::int64_t fail = last + 1;
    for (std::int64_t n = 1; n <= last; ++n) {
      spec.law_at(index.index_of_state(x)).add_sample(rng, x, scratch);
      if (!(x[i] > x[j])) {
        fail = n;
        break;
      }
    }
    first_failure[k] = fail;
  });
  curve.estimates = tally(first_failure, horizons);
  return curve;
}

PersistenceCurve order_persistence_estimate(const ProcessSpec& spec,
                                            const PersistenceRequest& request,
                                            std::int64_t horizon) {
  const std::int64_t h[] = {horizon};
  return order_persistence_curve(spec, request, h);
}

std::vector<Estimate> walk_survival_curve(std::span<const DiscreteVectorDistribution> regimes,
                                          const RegimePolicy& policy,
                                          std::span<const std::int64_t> horizons,
                                          std::int64_t runs, std::uint64_t seed,
                                          unsigned workers) {
  if (regimes.empty()) throw InputError("walk needs at least one regime");
  for (std::size_t k = 0; k < regimes.size(); ++k) {
    const auto& reg = regimes[k];
    if (reg.dimension() != 1) throw InputError("walk regimes must be one-dimensional");
    const bool zero_mass = reg.is_point_mass() && reg.atom(0)[0] == 0.0;
    if (!zero_mass && !(reg.mean()[0] > 0.0)) {
      throw InputError("regime " + std::to_string(k + 1) +
                       " must have positive mean or be the point mass at 0");
    }
  }
  if (!policy) throw InputError("walk needs a regime policy");
  if (runs < 1) throw InputError("walk needs at least one run");
  check_horizons(horizons);

  const std::int64_t last = horizons.back();
  std::vector<std::int64_t> first_failure(static_cast<std::size_t>(runs));
  parallel_for(first_failure.size(), workers, [&](std::size_t k) {
    Rng rng(derive_seed(seed, k));
    std::vector<double> path{0.0};
    path.reserve(static_cast<std::size_t>(last) + 1);
    std::int64_t fail = last + 1;
    for (std::int64_t n = 0; n < last; ++n) {
      const std::size_t regime = policy(path);
      if (regime >= regimes.size()) throw InputError("regime policy returned an unknown regime");
      const auto& reg = regimes[regime];
      const double y = path.back() + reg.atom(reg.sample_index(rng))[0];
      path.push_back(y);
      if (y < 0.0) {
        fail = n + 1;
        break;
      }
    }
    first_failure[k] = fail;
  });
  return tally(first_failure, horizons);
}

Estimate walk_survival_estimate(std::span<const DiscreteVectorDistribution> regimes,
                                const RegimePolicy& policy, std::int64_t horizon,
                                std::int64_t runs, std::uint64_t seed, unsigned workers) {
  const std::int64_t h[] = {horizon};
  return walk_survival_curve(regimes, policy, h, runs, seed, workers).front();
}

}  // namespace rankproc
