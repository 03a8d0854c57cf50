#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rankproc/process.hpp"
#include "rankproc/ranking.hpp"

namespace rankproc {

/// Ranking observed from `step` on (trace mode only).
struct ChangePoint {
  std::int64_t step = 0;
  Ranking ranking;
};

/// Outcome of one trajectory X_0, ..., X_N.
struct RunSummary {
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  std::vector<double> final_state;
  /// Ranking held over the whole trailing window, if any.
  std::optional<Ranking> settled_ranking;
  /// Largest n <= N with rk(X_n) != rk(X_{n-1}); 0 if the ranking never changed.
  std::int64_t last_change_step = 0;
  /// Run-length encoded rankings; empty unless tracing was requested.
  std::vector<ChangePoint> trace;

  /// X_N / N.
  std::vector<double> normalized_state() const;
};

struct RunOptions {
  bool trace = false;
};

/// Simulates N steps from a draw of the initial law. The run is settled at
/// r when rk(X_n) = r for every n in [N - W, N]. Deterministic in
/// (spec, N, W, seed). Throws InputError unless N >= W >= 1.
RunSummary run(const ProcessSpec& spec, std::int64_t horizon, std::int64_t window,
               std::uint64_t seed, RunOptions options = {});

struct EnsembleRequest {
  std::int64_t runs = 1;
  std::int64_t horizon = 1;
  std::int64_t window = 1;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;  // 0 = hardware concurrency
  bool trace = false;
};

struct EnsembleSummary {
  std::uint64_t master_seed = 0;
  std::string spec_digest;
  std::int64_t horizon = 0;
  std::int64_t window = 0;
  std::vector<RunSummary> runs;  // in run-index order
};

/// M independent runs; run k uses derive_seed(master_seed, k). The result
/// does not depend on the worker count.
EnsembleSummary ensemble(const ProcessSpec& spec, const EnsembleRequest& request);

/// Default settling window: N / 10, at least 1.
std::int64_t default_window(std::int64_t horizon) noexcept;

}  // namespace rankproc
