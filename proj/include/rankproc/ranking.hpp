#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rankproc {

/// Largest dimension for which the full set of rankings is enumerated.
inline constexpr int kMaxEnumerationDimension = 6;

/// A ranking of the components {0, ..., d-1}.
///
/// Positions are 1-based: `position(i) == 1` means component i is ranked
/// first. Ties are allowed, with skipped positions after a tie (standard
/// competition ranking): exactly `position(i) - 1` components are ranked
/// strictly above i. Instances are always valid; construction checks it.
class Ranking {
 public:
  /// Throws InputError unless `positions` is a valid ranking.
  explicit Ranking(std::vector<int> positions);

  /// The strict ranking with component i at position i + 1.
  static Ranking identity(int d);

  int dimension() const noexcept { return static_cast<int>(pos_.size()); }
  int position(std::size_t component) const { return pos_.at(component); }
  std::span<const int> positions() const noexcept { return pos_; }

  /// True iff no two components share a position.
  bool is_strict() const noexcept;

  /// Components ordered by position (ties broken by component index).
  /// For a strict ranking this is the inverse map.
  std::vector<std::size_t> order() const;

  /// Compact serialization, 1-based: "[1,3,1]".
  std::string to_string() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;
  friend auto operator<=>(const Ranking& a, const Ranking& b) { return a.pos_ <=> b.pos_; }

 private:
  std::vector<int> pos_;
};

/// Definition check on an arbitrary integer sequence. Never throws.
bool is_valid_ranking(std::span<const int> positions) noexcept;

/// Standard competition ranking of a real vector: position of i is one plus
/// the number of components strictly greater than x[i]. Ties use exact
/// equality. Throws InputError on empty input or non-finite entries.
Ranking rank_of(std::span<const double> x);

/// Every ranking of d components, once each, lexicographic on positions.
/// Throws InputError for d < 1, CapacityError for d > kMaxEnumerationDimension.
std::vector<Ranking> enumerate_rankings(int d);

/// Transitive, strongly complete relation: geq(a, b) means a is ranked at
/// least as high as b.
class WeakOrder {
 public:
  /// `geq` is row-major d*d. Throws InputError if the relation is not a
  /// weak order.
  WeakOrder(int d, std::vector<bool> geq);

  int dimension() const noexcept { return d_; }
  bool geq(std::size_t a, std::size_t b) const {
    return geq_.at(a * static_cast<std::size_t>(d_) + b);
  }

  friend bool operator==(const WeakOrder&, const WeakOrder&) = default;

 private:
  int d_;
  std::vector<bool> geq_;
};

/// a >= b iff position(a) <= position(b).
WeakOrder to_weak_order(const Ranking& r);

/// position(a) = #{b : not (a >= b)} + 1.
Ranking from_weak_order(const WeakOrder& w);

/// Dense lookup from a ranking (or directly from a state vector) to its
/// index in `enumerate_rankings(d)`. Used on the simulation hot path.
class RankingIndex {
 public:
  explicit RankingIndex(int d);

  int dimension() const noexcept { return d_; }
  std::size_t size() const noexcept { return rankings_.size(); }
  const std::vector<Ranking>& rankings() const noexcept { return rankings_; }
  const Ranking& at(std::size_t index) const { return rankings_.at(index); }

  std::size_t index_of(const Ranking& r) const;

  /// Index of rank_of(x) without materializing the ranking. x must have
  /// length d; entries are not checked for finiteness.
  std::size_t index_of_state(std::span<const double> x) const noexcept;

 private:
  std::uint32_t code_of(std::span<const int> pos) const noexcept;

  int d_;
  std::vector<Ranking> rankings_;
  std::vector<std::uint32_t> powers_;
  std::vector<std::int32_t> slot_;  // code -> index, -1 when unused
};

}  // namespace rankproc
