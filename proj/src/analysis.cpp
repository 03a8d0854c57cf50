#include "rankproc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankproc/errors.hpp"

namespace rankproc {

const char* to_string(Dominance d) noexcept {
  switch (d) {
    case Dominance::dominates: return "dominates";
    case Dominance::quasi_dominates_only: return "quasi_dominates_only";
    case Dominance::none: return "none";
  }
  return "none";
}

const char* to_string(Relation r) noexcept {
  switch (r) {
    case Relation::self: return "self";
    case Relation::dominates: return "dominates";
    case Relation::quasi_dominates_only: return "quasi_dominates_only";
    case Relation::none: return "none";
  }
  return "none";
}

namespace {

// Strict mean comparison with the tie tolerance. Records near ties.
bool mean_greater(double qi, double qj, const Ranking& r, std::size_t i, std::size_t j,
                  std::vector<NearTie>* near_ties) {
  const double diff = qi - qj;
  if (diff > kMeanTieTolerance) return true;
  if (near_ties && diff != 0.0 && std::abs(diff) <= kMeanTieTolerance) {
    near_ties->push_back({r, i, j, diff});
  }
  return false;
}

void check_components(const ProcessSpec& spec, std::size_t i, std::size_t j) {
  const auto d = static_cast<std::size_t>(spec.dimension());
  if (i >= d || j >= d) throw InputError("component index out of range");
  if (i == j) throw InputError("dominance needs two distinct components");
}

struct PairOutcome {
  bool quasi = true;
  bool tie_clause = true;
};

PairOutcome evaluate_pair(const ProcessSpec& spec, std::size_t i, std::size_t j,
                          std::vector<DominanceViolation>* violations,
                          std::vector<NearTie>* near_ties) {
  PairOutcome out;
  for (const auto& r : spec.rankings().rankings()) {
    const int pi = r.position(i);
    const int pj = r.position(j);
    if (pi > pj) continue;
    const auto& dist = spec.distribution(r);
    const double neq = dist.event_prob_neq(i, j);
    if (neq == 0.0) continue;
    if (pi < pj) {
      const auto q = dist.mean();
      if (!mean_greater(q[i], q[j], r, i, j, near_ties)) {
        out.quasi = false;
        if (violations) violations->push_back({i, j, r, "higher_ranked_mean_not_greater"});
      }
    } else if (!(dist.event_prob_gt(i, j) > 0.0)) {
      out.tie_clause = false;
      if (violations) violations->push_back({i, j, r, "cannot_pass_ahead_from_tie"});
    }
  }
  return out;
}

Dominance label(const PairOutcome& o) {
  if (!o.quasi) return Dominance::none;
  return o.tie_clause ? Dominance::dominates : Dominance::quasi_dominates_only;
}

void require_finite_support(const ProcessSpec& spec) {
  if (!spec.is_finite_support()) {
    throw UnsupportedSpecError("exact analysis needs finite-support laws for every ranking");
  }
}

// First failed terminal check for r, if any.
std::optional<TerminalWitness> terminal_violation(const ProcessSpec& spec, const Ranking& r,
                                                  std::vector<NearTie>* near_ties) {
  const auto& dist = spec.distribution(r);
  const auto q = dist.mean();
  const auto d = static_cast<std::size_t>(spec.dimension());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j || r.position(i) > r.position(j)) continue;
      if (r.position(i) == r.position(j)) {
        if (i < j && dist.event_prob_neq(i, j) != 0.0) {
          return TerminalWitness{r, i, j, TerminalCondition::tied_components_separate};
        }
        continue;
      }
      if (dist.event_prob_neq(i, j) != 0.0 && !mean_greater(q[i], q[j], r, i, j, near_ties)) {
        return TerminalWitness{r, i, j, TerminalCondition::order_not_sustained};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Dominance classify_dominance(const ProcessSpec& spec, std::size_t i, std::size_t j) {
  check_components(spec, i, j);
  require_finite_support(spec);
  return label(evaluate_pair(spec, i, j, nullptr, nullptr));
}

DominanceReport check_reinforcement_assumption(const ProcessSpec& spec) {
  require_finite_support(spec);
  const auto d = static_cast<std::size_t>(spec.dimension());
  DominanceReport report;
  report.d = spec.dimension();
  report.relation.assign(d * d, Relation::none);
  report.ordering_assumption_satisfied = true;

  std::vector<Dominance> labels(d * d, Dominance::none);
  std::vector<std::vector<DominanceViolation>> failures(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    report.relation[i * d + i] = Relation::self;
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      labels[i * d + j] = label(evaluate_pair(spec, i, j, &failures[i * d + j], &report.near_ties));
      switch (labels[i * d + j]) {
        case Dominance::dominates: report.relation[i * d + j] = Relation::dominates; break;
        case Dominance::quasi_dominates_only:
          report.relation[i * d + j] = Relation::quasi_dominates_only;
          break;
        case Dominance::none: report.relation[i * d + j] = Relation::none; break;
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const auto ij = labels[i * d + j];
      const auto ji = labels[j * d + i];
      const bool ok = ij == Dominance::dominates || ji == Dominance::dominates ||
                      (ij != Dominance::none && ji != Dominance::none);
      if (ok) continue;
      report.ordering_assumption_satisfied = false;
      for (const auto* f : {&failures[i * d + j], &failures[j * d + i]}) {
        report.violations.insert(report.violations.end(), f->begin(), f->end());
      }
    }
  }
  return report;
}

bool TerminalReport::contains(const Ranking& r) const {
  return std::find(terminal.begin(), terminal.end(), r) != terminal.end();
}

bool is_terminal(const ProcessSpec& spec, const Ranking& r) {
  require_finite_support(spec);
  if (r.dimension() != spec.dimension()) throw InputError("ranking has the wrong dimension");
  return !terminal_violation(spec, r, nullptr).has_value();
}

TerminalReport terminal_rankings(const ProcessSpec& spec) {
  require_finite_support(spec);
  TerminalReport report;
  for (const auto& r : spec.rankings().rankings()) {
    if (auto w = terminal_violation(spec, r, &report.near_ties)) {
      report.witnesses.push_back(std::move(*w));
    } else {
      report.terminal.push_back(r);
    }
  }
  return report;
}

bool all_pairs_separate(const ProcessSpec& spec) {
  require_finite_support(spec);
  const auto d = static_cast<std::size_t>(spec.dimension());
  for (const auto& r : spec.rankings().rankings()) {
    const auto& dist = spec.distribution(r);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        if (dist.event_prob_neq(i, j) == 0.0) return false;
      }
    }
  }
  return true;
}

std::optional<std::vector<Ranking>> terminal_rankings_fast(const ProcessSpec& spec) {
  if (!all_pairs_separate(spec)) return std::nullopt;
  std::vector<Ranking> out;
  for (const auto& r : spec.rankings().rankings()) {
    if (!r.is_strict()) continue;
    const auto q = spec.distribution(r).mean();
    const auto order = r.order();
    bool descending = true;
    for (std::size_t k = 0; descending && k + 1 < order.size(); ++k) {
      descending = q[order[k]] - q[order[k + 1]] > kMeanTieTolerance;
    }
    if (descending) out.push_back(r);
  }
  return out;
}

ReachabilityResult check_reachability_condition(const ProcessSpec& spec) {
  require_finite_support(spec);
  std::vector<std::size_t> perm(static_cast<std::size_t>(spec.dimension()));
  for (const auto& r : spec.rankings().rankings()) {
    const auto& dist = spec.distribution(r);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      if (!(dist.strict_chain_prob(perm) > 0.0)) return {false, r, perm};
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return {true, std::nullopt, {}};
}

bool is_polya_urn(const ProcessSpec& spec) {
  require_finite_support(spec);
  for (const auto& r : spec.rankings().rankings()) {
    const auto& dist = spec.distribution(r);
    for (std::size_t k = 0; k < dist.atom_count(); ++k) {
      int ones = 0;
      for (double v : dist.atom(k)) {
        if (v == 1.0) {
          ++ones;
        } else if (v != 0.0) {
          return false;
        }
      }
      if (ones != 1) return false;
    }
  }
  return true;
}

std::vector<UrnFixedPoint> urn_fixed_points(const ProcessSpec& spec) {
  if (!is_polya_urn(spec)) throw InputError("urn fixed points need a Polya urn spec");
  std::vector<UrnFixedPoint> out;
  for (const auto& r : spec.rankings().rankings()) {
    if (!r.is_strict()) continue;
    auto q = spec.distribution(r).mean();
    const auto order = r.order();
    bool ranked_by_r = true;
    for (std::size_t k = 0; ranked_by_r && k + 1 < order.size(); ++k) {
      ranked_by_r = q[order[k]] - q[order[k + 1]] > kMeanTieTolerance;
    }
    if (ranked_by_r) out.push_back({r, std::move(q)});
  }
  return out;
}

AnalysisReport analyze(const ProcessSpec& spec) {
  AnalysisReport report;
  report.dominance = check_reinforcement_assumption(spec);
  report.terminal = terminal_rankings(spec);
  report.all_pairs_separate = all_pairs_separate(spec);
  report.reachability = check_reachability_condition(spec);
  report.polya_urn = is_polya_urn(spec);
  if (report.polya_urn) report.fixed_points = urn_fixed_points(spec);
  return report;
}

}  // namespace rankproc
