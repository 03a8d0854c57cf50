#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rankproc/random.hpp"

namespace rankproc {

/// One support point of a finite distribution.
struct Atom {
  std::vector<double> value;
  double prob = 0.0;
};

/// Tolerance on |sum(prob) - 1| accepted at construction.
inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Finite-support probability distribution over real d-vectors.
///
/// Atoms with identical vectors are merged (first appearance keeps its
/// place). Immutable once built, so instances can be shared across threads.
class DiscreteVectorDistribution {
 public:
  /// Throws InputError if d < 1, an atom has the wrong length or a
  /// non-finite entry, a probability lies outside (0, 1], or the
  /// probabilities do not sum to one.
  DiscreteVectorDistribution(int d, std::vector<Atom> atoms);

  static DiscreteVectorDistribution point_mass(std::vector<double> value);
  static DiscreteVectorDistribution zeros(int d);

  int dimension() const noexcept { return d_; }
  std::size_t atom_count() const noexcept { return probs_.size(); }
  std::span<const double> atom(std::size_t k) const {
    return {values_.data() + k * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double prob(std::size_t k) const { return probs_.at(k); }
  bool is_point_mass() const noexcept { return probs_.size() == 1; }

  std::vector<double> mean() const;
  /// Population standard deviation of component i.
  double stddev(std::size_t i) const;

  /// P(x_i > x_j). Throws InputError for i == j or out-of-range indices.
  double event_prob_gt(std::size_t i, std::size_t j) const;
  /// P(x_i != x_j). Same preconditions as event_prob_gt.
  double event_prob_neq(std::size_t i, std::size_t j) const;

  /// P(x_{p0} > x_{p1} >= x_{p2} >= ... >= x_{p(d-1)}) for a 0-based
  /// permutation p. Throws InputError if `perm` is not a permutation.
  double strict_chain_prob(std::span<const std::size_t> perm) const;

  /// Index of a sampled atom (inverse CDF). Consumes one draw unless the
  /// distribution is a point mass.
  std::size_t sample_index(Rng& rng) const;
  std::vector<double> sample(Rng& rng) const;

  friend bool operator==(const DiscreteVectorDistribution&,
                         const DiscreteVectorDistribution&) = default;

 private:
  void check_pair(std::size_t i, std::size_t j) const;

  int d_;
  std::vector<double> values_;  // atom-major, d_ entries per atom
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

/// Simulation-only increment law backed by a callback. The callback must
/// be safe to call concurrently with distinct engines.
struct SamplerLaw {
  int dimension = 0;
  std::function<void(Rng&, std::span<double>)> draw;
  std::string name;
};

/// Increment law of one ranking cell: either an exact finite-support
/// distribution or an opaque sampler.
class IncrementLaw {
 public:
  IncrementLaw(DiscreteVectorDistribution dist) : law_(std::move(dist)) {}  // NOLINT
  IncrementLaw(SamplerLaw sampler);                                         // NOLINT

  int dimension() const noexcept;
  bool is_discrete() const noexcept {
    return std::holds_alternative<DiscreteVectorDistribution>(law_);
  }
  /// Throws UnsupportedSpecError for sampler-only laws.
  const DiscreteVectorDistribution& discrete() const;
  const SamplerLaw* sampler() const noexcept { return std::get_if<SamplerLaw>(&law_); }

  /// Adds one sampled increment to `state`. `scratch` must have length d.
  void add_sample(Rng& rng, std::span<double> state, std::span<double> scratch) const;

 private:
  std::variant<DiscreteVectorDistribution, SamplerLaw> law_;
};

}  // namespace rankproc
