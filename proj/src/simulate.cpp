#include "rankproc/simulate.hpp"

#include "rankproc/errors.hpp"
#include "rankproc/parallel.hpp"
#include "rankproc/random.hpp"

namespace rankproc {

std::vector<double> RunSummary::normalized_state() const {
  std::vector<double> out(final_state);
  for (double& v : out) v /= static_cast<double>(horizon);
  return out;
}

std::int64_t default_window(std::int64_t horizon) noexcept {
  return std::max<std::int64_t>(1, horizon / 10);
}

RunSummary run(const ProcessSpec& spec, std::int64_t horizon, std::int64_t window,
               std::uint64_t seed, RunOptions options) {
  if (window < 1 || horizon < window) throw InputError("run needs horizon >= window >= 1");

  Rng rng(seed);
  const auto& index = spec.rankings();
  std::vector<double> x = spec.initial().sample(rng);
  std::vector<double> scratch(x.size());

  RunSummary out;
  out.seed = seed;
  out.horizon = horizon;

  std::size_t current = index.index_of_state(x);
  if (options.trace) out.trace.push_back({0, index.at(current)});
  for (std::int64_t n = 1; n <= horizon; ++n) {
    spec.law_at(current).add_sample(rng, x, scratch);
    const std::size_t next = index.index_of_state(x);
    if (next != current) {
      out.last_change_step = n;
      current = next;
      if (options.trace) out.trace.push_back({n, index.at(current)});
    }
  }
  if (out.last_change_step <= horizon - window) out.settled_ranking = index.at(current);
  out.final_state = std::move(x);
  return out;
}

EnsembleSummary ensemble(const ProcessSpec& spec, const EnsembleRequest& request) {
  if (request.runs < 1) throw InputError("ensemble needs at least one run");
  if (request.window < 1 || request.horizon < request.window) {
    throw InputError("ensemble needs horizon >= window >= 1");
  }
  EnsembleSummary out;
  out.master_seed = request.master_seed;
  out.spec_digest = spec_digest(spec);
  out.horizon = request.horizon;
  out.window = request.window;
  out.runs.resize(static_cast<std::size_t>(request.runs));
  parallel_for(out.runs.size(), request.workers, [&](std::size_t k) {
    out.runs[k] = run(spec, request.horizon, request.window,
                      derive_seed(request.master_seed, k), RunOptions{request.trace});
  });
  return out;
}

}  // namespace rankproc
