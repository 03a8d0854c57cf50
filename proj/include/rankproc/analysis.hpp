#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rankproc/process.hpp"
#include "rankproc/ranking.hpp"

namespace rankproc {

/// Mean differences at or below this are ties, never strict inequalities.
inline constexpr double kMeanTieTolerance = 1e-9;

/// Strongest dominance label of i over j.
enum class Dominance { none, quasi_dominates_only, dominates };

/// Entry of the dominance matrix; `self` only on the diagonal.
enum class Relation { self, none, quasi_dominates_only, dominates };

const char* to_string(Dominance d) noexcept;
const char* to_string(Relation r) noexcept;

/// A mean comparison that fell inside the tie tolerance without being
/// exactly equal. Classification treated it as a tie.
struct NearTie {
  Ranking ranking;
  std::size_t i = 0;
  std::size_t j = 0;
  double difference = 0.0;  // q_i - q_j
};

struct DominanceViolation {
  std::size_t i = 0;  // component that fails to (quasi-)dominate j
  std::size_t j = 0;
  Ranking ranking;
  std::string reason;
};

struct DominanceReport {
  int d = 0;
  std::vector<Relation> relation;  // row-major d*d: relation of i over j
  bool ordering_assumption_satisfied = false;
  std::vector<DominanceViolation> violations;  // only for pairs that break the assumption
  std::vector<NearTie> near_ties;

  Relation at(std::size_t i, std::size_t j) const {
    return relation.at(i * static_cast<std::size_t>(d) + j);
  }
};

/// Label of i over j. Quasi-dominance: whenever r ranks i above j, either
/// q_i > q_j or the two components never move apart under r. Dominance adds:
/// whenever r ties i and j, i can pass ahead or they never move apart.
/// Throws InputError for i == j, UnsupportedSpecError for sampler laws.
Dominance classify_dominance(const ProcessSpec& spec, std::size_t i, std::size_t j);

/// Full dominance matrix and the reinforcement assumption: every pair is
/// ordered by dominance in some direction or quasi-dominates both ways.
DominanceReport check_reinforcement_assumption(const ProcessSpec& spec);

enum class TerminalCondition {
  tied_components_separate = 1,  // r ties i and j but they can move apart
  order_not_sustained = 2,       // r ranks i above j, q_i <= q_j, and they can move apart
};

struct TerminalWitness {
  Ranking ranking;
  std::size_t i = 0;
  std::size_t j = 0;
  TerminalCondition condition = TerminalCondition::tied_components_separate;
};

struct TerminalReport {
  std::vector<Ranking> terminal;
  std::vector<TerminalWitness> witnesses;  // first failed check per non-terminal ranking
  std::vector<NearTie> near_ties;

  bool contains(const Ranking& r) const;
};

/// Whether r can be the eventual constant ranking for some initial law.
bool is_terminal(const ProcessSpec& spec, const Ranking& r);
TerminalReport terminal_rankings(const ProcessSpec& spec);

/// Shortcut valid when every pair of components moves apart with positive
/// probability under every ranking: terminal iff strict with means
/// strictly decreasing along the ranking. nullopt when that precondition
/// does not hold.
std::optional<std::vector<Ranking>> terminal_rankings_fast(const ProcessSpec& spec);

/// True iff P(x_i != x_j) > 0 for all pairs under all rankings.
bool all_pairs_separate(const ProcessSpec& spec);

struct ReachabilityResult {
  bool holds = false;
  std::optional<Ranking> failing_ranking;
  std::vector<std::size_t> failing_permutation;  // 0-based
};

/// Checks that for every ranking and every permutation p the increment law
/// gives positive mass to x_{p0} > x_{p1} >= ... >= x_{p(d-1)}. Under this
/// condition every terminal ranking is reached from any initial law.
ReachabilityResult check_reachability_condition(const ProcessSpec& spec);

/// True iff every atom of every law is a standard basis vector.
bool is_polya_urn(const ProcessSpec& spec);

struct UrnFixedPoint {
  Ranking ranking;
  std::vector<double> point;
};

/// Fixed points of the urn function with pairwise distinct coordinates:
/// (r, q^r) for each strict r whose mean vector is ranked exactly by r.
/// Throws InputError if the spec is not a Polya urn.
std::vector<UrnFixedPoint> urn_fixed_points(const ProcessSpec& spec);

struct AnalysisReport {
  DominanceReport dominance;
  TerminalReport terminal;
  bool all_pairs_separate = false;
  ReachabilityResult reachability;
  bool polya_urn = false;
  std::vector<UrnFixedPoint> fixed_points;
};

AnalysisReport analyze(const ProcessSpec& spec);

}  // namespace rankproc
