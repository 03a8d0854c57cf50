#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rankproc/analysis.hpp"
#include "rankproc/distribution.hpp"
#include "rankproc/simulate.hpp"

namespace rankproc {

/// Asymptotic KS constant for a 5% two-sided test.
inline constexpr double kKsCritical05 = 1.36;
/// Fewest settled runs for which clt_check is defined.
inline constexpr std::int64_t kMinCltRuns = 200;

struct RankingFrequency {
  Ranking ranking;
  std::int64_t count = 0;
  double frequency = 0.0;
  bool terminal = false;
};

struct SllnEntry {
  Ranking ranking;
  std::int64_t runs = 0;
  std::vector<double> conditional_mean;  // mean of X_N / N over runs settled at ranking
  std::vector<double> expected;          // q^r
  double max_error = 0.0;
};

struct KsEntry {
  Ranking ranking;
  std::size_t component = 0;
  std::int64_t runs = 0;
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

struct LimitLawReport {
  std::int64_t total_runs = 0;
  std::vector<RankingFrequency> frequencies;  // settled rankings, ascending
  std::int64_t undetermined = 0;
  double undetermined_fraction = 0.0;
  std::vector<RankingFrequency> anomalies;  // settled at a non-terminal ranking
  std::vector<SllnEntry> slln;
  std::vector<KsEntry> ks;
  std::vector<std::string> notes;
};

/// Empirical limit-ranking frequencies; flags settled rankings that are not
/// terminal. Throws InputError on an empty ensemble.
LimitLawReport limit_ranking_distribution(const EnsembleSummary& ensemble,
                                          const TerminalReport& terminal);

/// Per terminal ranking with settled runs: max_i |mean(X^i_N / N) - q^r_i|.
std::vector<SllnEntry> slln_check(const EnsembleSummary& ensemble,
                                  const TerminalReport& terminal, const ProcessSpec& spec);

/// Standard normal CDF.
double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov distance between the empirical CDF of
/// `samples` and `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// kKsCritical05 / sqrt(n).
double ks_critical_value(std::int64_t n);

/// KS distance of (X^i_N - N q^r_i) / (sqrt(N) sigma^r_i) over runs settled
/// at r against the standard normal. Throws InputError with fewer than
/// kMinCltRuns such runs and DegenerateError when sigma^r_i = 0.
double clt_check(const EnsembleSummary& ensemble, const Ranking& r, std::size_t i,
                 const ProcessSpec& spec);

/// KS distance of m standard normal draws against the standard normal;
/// calibrates the test itself.
double clt_self_test(std::int64_t m, std::uint64_t seed);

struct VerifyOptions {
  std::int64_t slln_min_runs = 100;
  double slln_tolerance = 0.02;
  std::int64_t ks_min_runs = kMinCltRuns;
};

/// Frequencies, SLLN and CLT checks in one report.
LimitLawReport verify_limit_laws(const EnsembleSummary& ensemble, const ProcessSpec& spec,
                                 const TerminalReport& terminal, const VerifyOptions& options = {});

/// Binomial proportion with normal-approximation standard error.
struct Estimate {
  std::int64_t successes = 0;
  std::int64_t runs = 0;
  double value = 0.0;
  double standard_error = 0.0;
};

Estimate make_estimate(std::int64_t successes, std::int64_t runs);

struct PersistenceRequest {
  std::size_t leader = 0;  // i
  std::size_t trailer = 0; // j
  double initial_gap = 1.0;
  std::int64_t runs = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct PersistenceCurve {
  std::vector<std::int64_t> horizons;
  std::vector<Estimate> estimates;
  /// False when the analyzer could not confirm that the leader
  /// quasi-dominates the trailer; the estimates are still computed.
  bool precondition_met = false;
};

/// Fraction of runs, started from a draw of the initial law with the leader
/// moved to trailer + gap, in which the leader stays strictly ahead for
/// every n <= N. All horizons share one set of trajectories, so the curve
/// is nonincreasing in N exactly. Horizons must be ascending and positive.
PersistenceCurve order_persistence_curve(const ProcessSpec& spec, const PersistenceRequest& request,
                                         std::span<const std::int64_t> horizons);

PersistenceCurve order_persistence_estimate(const ProcessSpec& spec,
                                            const PersistenceRequest& request,
                                            std::int64_t horizon);

/// Chooses the regime of the next increment from the path Y_0..Y_n.
using RegimePolicy = std::function<std::size_t(std::span<const double>)>;

/// Fraction of runs of the regime-switching walk (Y_0 = 0) with Y_n >= 0
/// for all n <= N, for each horizon. Each regime must be one-dimensional
/// with positive mean or be the point mass at 0; otherwise InputError.
std::vector<Estimate> walk_survival_curve(std::span<const DiscreteVectorDistribution> regimes,
                                          const RegimePolicy& policy,
                                          std::span<const std::int64_t> horizons,
                                          std::int64_t runs, std::uint64_t seed,
                                          unsigned workers = 1);

Estimate walk_survival_estimate(std::span<const DiscreteVectorDistribution> regimes,
                                const RegimePolicy& policy, std::int64_t horizon,
                                std::int64_t runs, std::uint64_t seed, unsigned workers = 1);

}  // namespace rankproc
