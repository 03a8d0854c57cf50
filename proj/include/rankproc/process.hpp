#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankproc/distribution.hpp"
#include "rankproc/random.hpp"
#include "rankproc/ranking.hpp"

namespace rankproc {

/// A ranking-based Markov process: the increment law depends on the state
/// only through the ranking of its components.
///
/// Holds one IncrementLaw per ranking of d components (in the order of
/// `enumerate_rankings(d)`) and the initial distribution. Immutable.
class ProcessSpec {
 public:
  /// `laws[k]` is the increment law for `enumerate_rankings(d)[k]`, with d
  /// taken from `initial`. Throws InputError on count or dimension mismatch.
  ProcessSpec(std::vector<IncrementLaw> laws, DiscreteVectorDistribution initial,
              std::string model = "table");

  /// Throws InputError if any ranking of d components is missing from
  /// `table` or has a law of the wrong dimension.
  static ProcessSpec from_table(int d, const std::map<Ranking, IncrementLaw>& table,
                                DiscreteVectorDistribution initial);

  int dimension() const noexcept { return index_->dimension(); }
  const RankingIndex& rankings() const noexcept { return *index_; }
  const std::string& model() const noexcept { return model_; }

  const IncrementLaw& law(const Ranking& r) const { return laws_.at(index_->index_of(r)); }
  const IncrementLaw& law_at(std::size_t index) const { return laws_.at(index); }
  const DiscreteVectorDistribution& initial() const noexcept { return initial_; }

  /// True iff every law is a finite-support distribution.
  bool is_finite_support() const noexcept;
  /// Finite-support law of r; throws UnsupportedSpecError otherwise.
  const DiscreteVectorDistribution& distribution(const Ranking& r) const {
    return law(r).discrete();
  }

  /// Modelling assumptions worth surfacing in reports.
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  /// Same kernel, different initial distribution.
  ProcessSpec with_initial(DiscreteVectorDistribution initial) const;

 private:
  std::shared_ptr<const RankingIndex> index_;
  std::vector<IncrementLaw> laws_;
  DiscreteVectorDistribution initial_;
  std::string model_;
  std::vector<std::string> notes_;
};

/// Increment law at state x: the law of rank_of(x).
const IncrementLaw& kernel_law(const ProcessSpec& spec, std::span<const double> x);
/// Finite-support variant of kernel_law; throws UnsupportedSpecError.
const DiscreteVectorDistribution& kernel_distribution(const ProcessSpec& spec,
                                                      std::span<const double> x);

/// x + delta with delta drawn from the law of rank_of(x).
std::vector<double> step(const ProcessSpec& spec, std::span<const double> x, Rng& rng);

/// Additive-bonus urn: color i is drawn with probability proportional to
/// a[i] + lambda[r(i) - 1]. `lambda` must be strictly decreasing with a
/// nonnegative last entry; `a` must be nonnegative.
ProcessSpec build_additive_urn(std::span<const double> a, std::span<const double> lambda,
                               std::optional<DiscreteVectorDistribution> initial = std::nullopt);

/// Examination probability of component i under ranking r.
using ExamFunction = std::function<double(const Ranking&, std::size_t)>;

/// Maximum dimension of the click model (2^d atoms per law).
inline constexpr int kMaxClickDimension = 14;

/// Position-based click model: each component is clicked independently
/// with probability exam(r, i) * u[i]. Requires u in (0,1), exam in (0,1],
/// and exam(r, i) > exam(r, j) whenever r ranks i above j.
ProcessSpec build_click_model(std::span<const double> u, const ExamFunction& exam,
                              std::optional<DiscreteVectorDistribution> initial = std::nullopt);

/// Examination by display slot. Components tied in the ranking share the
/// slots they jointly occupy and get the average of those slot
/// probabilities. `by_slot` must be strictly decreasing within (0, 1].
ExamFunction positional_examination(std::vector<double> by_slot);

/// Warnings about configured increments that are not short dyadic
/// rationals; ties between such components may be lost to rounding.
std::vector<std::string> lint_spec(const ProcessSpec& spec);

/// Stable content hash (16 hex digits) of the kernel and initial law.
std::string spec_digest(const ProcessSpec& spec);

}  // namespace rankproc
