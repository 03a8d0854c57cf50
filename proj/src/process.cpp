#include "rankproc/process.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>

#include "rankproc/errors.hpp"

namespace rankproc {

ProcessSpec::ProcessSpec(std::vector<IncrementLaw> laws, DiscreteVectorDistribution initial,
                         std::string model)
    : index_(std::make_shared<const RankingIndex>(initial.dimension())),
      laws_(std::move(laws)),
      initial_(std::move(initial)),
      model_(std::move(model)) {
  if (laws_.size() != index_->size()) {
    throw InputError("process needs " + std::to_string(index_->size()) + " laws for d = " +
                     std::to_string(index_->dimension()) + ", got " +
                     std::to_string(laws_.size()));
  }
  for (std::size_t k = 0; k < laws_.size(); ++k) {
    if (laws_[k].dimension() != index_->dimension()) {
      throw InputError("law for ranking " + index_->at(k).to_string() +
                       " has the wrong dimension");
    }
  }
}

ProcessSpec ProcessSpec::from_table(int d, const std::map<Ranking, IncrementLaw>& table,
                                    DiscreteVectorDistribution initial) {
  if (initial.dimension() != d) throw InputError("initial distribution has the wrong dimension");
  std::vector<IncrementLaw> laws;
  for (const auto& r : enumerate_rankings(d)) {
    auto it = table.find(r);
    if (it == table.end()) throw InputError("table is missing ranking " + r.to_string());
    laws.push_back(it->second);
  }
  if (table.size() != laws.size()) {
    throw InputError("table has entries for rankings of another dimension");
  }
  return ProcessSpec(std::move(laws), std::move(initial));
}

bool ProcessSpec::is_finite_support() const noexcept {
  for (const auto& l : laws_) {
    if (!l.is_discrete()) return false;
  }
  return true;
}

ProcessSpec ProcessSpec::with_initial(DiscreteVectorDistribution initial) const {
  if (initial.dimension() != dimension()) {
    throw InputError("initial distribution has the wrong dimension");
  }
  ProcessSpec copy = *this;
  copy.initial_ = std::move(initial);
  return copy;
}

const IncrementLaw& kernel_law(const ProcessSpec& spec, std::span<const double> x) {
  return spec.law(rank_of(x));
}

const DiscreteVectorDistribution& kernel_distribution(const ProcessSpec& spec,
                                                      std::span<const double> x) {
  return kernel_law(spec, x).discrete();
}

std::vector<double> step(const ProcessSpec& spec, std::span<const double> x, Rng& rng) {
  if (x.size() != static_cast<std::size_t>(spec.dimension())) {
    throw InputError("state has the wrong dimension");
  }
  std::vector<double> next(x.begin(), x.end());
  std::vector<double> scratch(x.size());
  kernel_law(spec, x).add_sample(rng, next, scratch);
  return next;
}

ProcessSpec build_additive_urn(std::span<const double> a, std::span<const double> lambda,
                               std::optional<DiscreteVectorDistribution> initial) {
  const auto d = static_cast<int>(a.size());
  if (d < 1) throw InputError("additive urn needs at least one color");
  if (lambda.size() != a.size()) throw InputError("a and lambda must have the same length");
  for (double v : a) {
    if (!std::isfinite(v) || v < 0.0) throw InputError("propensities a must be >= 0");
  }
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (!std::isfinite(lambda[k])) throw InputError("lambda must be finite");
    if (k + 1 < lambda.size() && !(lambda[k] > lambda[k + 1])) {
      throw InputError("lambda must be strictly decreasing");
    }
  }
  if (lambda.back() < 0.0) throw InputError("last lambda entry must be >= 0");

  std::vector<IncrementLaw> laws;
  for (const auto& r : enumerate_rankings(d)) {
    std::vector<double> weight(a.size());
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      weight[i] = a[i] + lambda[static_cast<std::size_t>(r.position(i) - 1)];
      total += weight[i];
    }
    if (!(total > 0.0)) {
      throw InputError("additive urn has zero total weight under ranking " + r.to_string());
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (weight[i] == 0.0) continue;
      std::vector<double> e(a.size(), 0.0);
      e[i] = 1.0;
      atoms.push_back({std::move(e), weight[i] / total});
    }
    laws.emplace_back(DiscreteVectorDistribution(d, std::move(atoms)));
  }
  return ProcessSpec(std::move(laws), initial ? *initial : DiscreteVectorDistribution::zeros(d),
                     "additive_urn");
}

ProcessSpec build_click_model(std::span<const double> u, const ExamFunction& exam,
                              std::optional<DiscreteVectorDistribution> initial) {
  const auto d = static_cast<int>(u.size());
  if (d < 1) throw InputError("click model needs at least one item");
  if (d > kMaxClickDimension) {
    throw CapacityError("click model supports at most " + std::to_string(kMaxClickDimension) +
                        " items (2^d atoms per law)");
  }
  for (double v : u) {
    if (!(v > 0.0 && v < 1.0)) throw InputError("relevance u must lie in (0, 1)");
  }

  const auto n = static_cast<std::size_t>(d);
  std::vector<IncrementLaw> laws;
  for (const auto& r : enumerate_rankings(d)) {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = exam(r, i);
      if (!(a[i] > 0.0 && a[i] <= 1.0)) {
        throw InputError("examination probability for item " + std::to_string(i + 1) +
                         " under ranking " + r.to_string() + " must lie in (0, 1]");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (r.position(i) < r.position(j) && !(a[i] > a[j])) {
          throw InputError("examination not decreasing in position: ranking " + r.to_string() +
                           ", item " + std::to_string(i + 1) + " is ranked above item " +
                           std::to_string(j + 1) + " but is not examined more often");
        }
      }
    }
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = a[i] * u[i];

    std::vector<Atom> atoms;
    atoms.reserve(std::size_t{1} << n);
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      Atom atom{std::vector<double>(n, 0.0), 1.0};
      for (std::size_t i = 0; i < n; ++i) {
        const bool click = (mask >> i) & 1U;
        atom.value[i] = click ? 1.0 : 0.0;
        atom.prob *= click ? q[i] : 1.0 - q[i];
      }
      atoms.push_back(std::move(atom));
    }
    laws.emplace_back(DiscreteVectorDistribution(d, std::move(atoms)));
  }
  ProcessSpec spec(std::move(laws), initial ? *initial : DiscreteVectorDistribution::zeros(d),
                   "click");
  spec.add_note(
      "click model: examinations are independent across items given the ranking, and "
      "independent of relevance");
  return spec;
}

ExamFunction positional_examination(std::vector<double> by_slot) {
  if (by_slot.empty()) throw InputError("positional examination needs at least one slot");
  for (std::size_t k = 0; k < by_slot.size(); ++k) {
    if (!(by_slot[k] > 0.0 && by_slot[k] <= 1.0)) {
      throw InputError("slot examination probabilities must lie in (0, 1]");
    }
    if (k + 1 < by_slot.size() && !(by_slot[k] > by_slot[k + 1])) {
      throw InputError("slot examination probabilities must be strictly decreasing");
    }
  }
  return [slots = std::move(by_slot)](const Ranking& r, std::size_t i) {
    if (static_cast<std::size_t>(r.dimension()) != slots.size()) {
      throw InputError("ranking dimension does not match the number of slots");
    }
    const int p = r.position(i);
    int tied = 0;
    for (int q : r.positions()) tied += (q == p) ? 1 : 0;
    double sum = 0.0;
    for (int s = p; s < p + tied; ++s) sum += slots[static_cast<std::size_t>(s - 1)];
    return sum / tied;
  };
}

namespace {

bool is_short_dyadic(double v) {
  const double scaled = std::ldexp(v, 20);
  return std::abs(v) < 0x1.0p32 && scaled == std::trunc(scaled);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_distribution(std::ostream& os, const DiscreteVectorDistribution& dist) {
  for (std::size_t k = 0; k < dist.atom_count(); ++k) {
    os << '(';
    for (double v : dist.atom(k)) os << v << ' ';
    os << ':' << dist.prob(k) << ')';
  }
}

}  // namespace

std::vector<std::string> lint_spec(const ProcessSpec& spec) {
  std::vector<std::string> warnings;
  const auto& index = spec.rankings();
  for (std::size_t k = 0; k < index.size(); ++k) {
    const auto& law = spec.law_at(k);
    if (!law.is_discrete()) continue;
    const auto& dist = law.discrete();
    for (std::size_t m = 0; m < dist.atom_count(); ++m) {
      bool exact = true;
      for (double v : dist.atom(m)) exact = exact && is_short_dyadic(v);
      if (!exact) {
        warnings.push_back("ranking " + index.at(k).to_string() + ", atom " +
                           std::to_string(m + 1) +
                           ": increment is not exactly representable; tie events may be "
                           "numerically unreliable");
      }
    }
  }
  for (std::size_t m = 0; m < spec.initial().atom_count(); ++m) {
    bool exact = true;
    for (double v : spec.initial().atom(m)) exact = exact && is_short_dyadic(v);
    if (!exact) {
      warnings.push_back("initial atom " + std::to_string(m + 1) +
                         " is not exactly representable; initial ties may be lost");
    }
  }
  return warnings;
}

std::string spec_digest(const ProcessSpec& spec) {
  std::ostringstream os;
  os << std::hexfloat << "d=" << spec.dimension() << ';';
  const auto& index = spec.rankings();
  for (std::size_t k = 0; k < index.size(); ++k) {
    os << index.at(k).to_string() << '=';
    const auto& law = spec.law_at(k);
    if (law.is_discrete()) {
      write_distribution(os, law.discrete());
    } else {
      os << "sampler:" << law.sampler()->name;
    }
    os << ';';
  }
  os << "initial=";
  write_distribution(os, spec.initial());
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(os.str());
  return hex.str();
}

}  // namespace rankproc
