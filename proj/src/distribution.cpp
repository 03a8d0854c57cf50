#include "rankproc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rankproc/errors.hpp"

namespace rankproc {

DiscreteVectorDistribution::DiscreteVectorDistribution(int d, std::vector<Atom> atoms) : d_(d) {
  if (d < 1) throw InputError("distribution dimension must be positive");
  if (atoms.empty()) throw InputError("distribution needs at least one atom");

  std::map<std::vector<double>, std::size_t> seen;
  double total = 0.0;
  for (auto& a : atoms) {
    if (a.value.size() != static_cast<std::size_t>(d)) {
      throw InputError("atom has length " + std::to_string(a.value.size()) + ", expected " +
                       std::to_string(d));
    }
    for (double v : a.value) {
      if (!std::isfinite(v)) throw InputError("atom has a non-finite entry");
    }
    if (!(a.prob > 0.0 && a.prob <= 1.0)) {
      throw InputError("atom probability must lie in (0, 1]");
    }
    total += a.prob;
    // -0.0 and 0.0 compare equal but order differently in std::map.
    for (double& v : a.value) v = v == 0.0 ? 0.0 : v;
    auto [it, inserted] = seen.try_emplace(a.value, probs_.size());
    if (inserted) {
      values_.insert(values_.end(), a.value.begin(), a.value.end());
      probs_.push_back(a.prob);
    } else {
      probs_[it->second] += a.prob;
    }
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    throw InputError("atom probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  for (double p : probs_) {
    if (p > 1.0 + kProbabilitySumTolerance) throw InputError("merged atom probability exceeds 1");
  }
  cumulative_.resize(probs_.size());
  double c = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    c += probs_[k];
    cumulative_[k] = c;
  }
  cumulative_.back() = 1.0;
}

DiscreteVectorDistribution DiscreteVectorDistribution::point_mass(std::vector<double> value) {
  const auto d = static_cast<int>(value.size());
  return DiscreteVectorDistribution(d, {Atom{std::move(value), 1.0}});
}

DiscreteVectorDistribution DiscreteVectorDistribution::zeros(int d) {
  if (d < 1) throw InputError("distribution dimension must be positive");
  return point_mass(std::vector<double>(static_cast<std::size_t>(d), 0.0));
}

std::vector<double> DiscreteVectorDistribution::mean() const {
  std::vector<double> m(static_cast<std::size_t>(d_), 0.0);
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const auto v = atom(k);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += probs_[k] * v[i];
  }
  return m;
}

double DiscreteVectorDistribution::stddev(std::size_t i) const {
  if (i >= static_cast<std::size_t>(d_)) throw InputError("component index out of range");
  if (is_point_mass()) return 0.0;
  double mu = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) mu += probs_[k] * atom(k)[i];
  double var = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const double dev = atom(k)[i] - mu;
    var += probs_[k] * dev * dev;
  }
  return std::sqrt(var);
}

void DiscreteVectorDistribution::check_pair(std::size_t i, std::size_t j) const {
  const auto d = static_cast<std::size_t>(d_);
  if (i >= d || j >= d) throw InputError("component index out of range");
  if (i == j) throw InputError("comparison events need two distinct components");
}

double DiscreteVectorDistribution::event_prob_gt(std::size_t i, std::size_t j) const {
  check_pair(i, j);
  double p = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const auto v = atom(k);
    if (v[i] > v[j]) p += probs_[k];
  }
  return p;
}

double DiscreteVectorDistribution::event_prob_neq(std::size_t i, std::size_t j) const {
  check_pair(i, j);
  double p = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const auto v = atom(k);
    if (v[i] != v[j]) p += probs_[k];
  }
  return p;
}

double DiscreteVectorDistribution::strict_chain_prob(std::span<const std::size_t> perm) const {
  const auto d = static_cast<std::size_t>(d_);
  if (perm.size() != d) throw InputError("permutation has the wrong length");
  std::vector<bool> hit(d, false);
  for (std::size_t p : perm) {
    if (p >= d || hit[p]) throw InputError("not a permutation");
    hit[p] = true;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const auto v = atom(k);
    bool ok = d < 2 || v[perm[0]] > v[perm[1]];
    for (std::size_t m = 1; ok && m + 1 < d; ++m) ok = v[perm[m]] >= v[perm[m + 1]];
    if (ok) total += probs_[k];
  }
  return total;
}

std::size_t DiscreteVectorDistribution::sample_index(Rng& rng) const {
  if (probs_.size() == 1) return 0;
  const double u = uniform01(rng);
  if (cumulative_.size() <= 8) {
    std::size_t k = 0;
    while (u >= cumulative_[k]) ++k;
    return k;
  }
  return static_cast<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
}

std::vector<double> DiscreteVectorDistribution::sample(Rng& rng) const {
  const auto v = atom(sample_index(rng));
  return {v.begin(), v.end()};
}

IncrementLaw::IncrementLaw(SamplerLaw sampler) : law_(std::move(sampler)) {
  const auto& s = std::get<SamplerLaw>(law_);
  if (s.dimension < 1) throw InputError("sampler law dimension must be positive");
  if (!s.draw) throw InputError("sampler law has no callback");
}

int IncrementLaw::dimension() const noexcept {
  if (const auto* d = std::get_if<DiscreteVectorDistribution>(&law_)) return d->dimension();
  return std::get<SamplerLaw>(law_).dimension;
}

const DiscreteVectorDistribution& IncrementLaw::discrete() const {
  if (const auto* d = std::get_if<DiscreteVectorDistribution>(&law_)) return *d;
  throw UnsupportedSpecError("exact analysis needs finite-support laws; '" +
                             std::get<SamplerLaw>(law_).name + "' is sampler-only");
}

void IncrementLaw::add_sample(Rng& rng, std::span<double> state,
                              std::span<double> scratch) const {
  if (const auto* d = std::get_if<DiscreteVectorDistribution>(&law_)) {
    const auto v = d->atom(d->sample_index(rng));
    for (std::size_t i = 0; i < state.size(); ++i) state[i] += v[i];
    return;
  }
  std::get<SamplerLaw>(law_).draw(rng, scratch);
  for (std::size_t i = 0; i < state.size(); ++i) state[i] += scratch[i];
}

}  // namespace rankproc
