#include "rankproc/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rankproc/errors.hpp"

namespace rankproc {

bool is_valid_ranking(std::span<const int> positions) noexcept {
  const auto d = static_cast<int>(positions.size());
  if (d == 0) return false;
  for (int p : positions) {
    if (p < 1 || p > d) return false;
  }
  for (int p : positions) {
    const auto above = std::count_if(positions.begin(), positions.end(),
                                     [p](int q) { return q < p; });
    if (above != p - 1) return false;
  }
  return true;
}

Ranking::Ranking(std::vector<int> positions) : pos_(std::move(positions)) {
  if (!is_valid_ranking(pos_)) {
    std::ostringstream os;
    os << "not a valid ranking: [";
    for (std::size_t i = 0; i < pos_.size(); ++i) os << (i ? "," : "") << pos_[i];
    os << "]";
    throw InputError(os.str());
  }
}

Ranking Ranking::identity(int d) {
  if (d < 1) throw InputError("ranking dimension must be positive");
  std::vector<int> pos(static_cast<std::size_t>(d));
  std::iota(pos.begin(), pos.end(), 1);
  return Ranking(std::move(pos));
}

bool Ranking::is_strict() const noexcept {
  std::vector<bool> seen(pos_.size() + 1, false);
  for (int p : pos_) {
    if (seen[static_cast<std::size_t>(p)]) return false;
    seen[static_cast<std::size_t>(p)] = true;
  }
  return true;
}

std::vector<std::size_t> Ranking::order() const {
  std::vector<std::size_t> idx(pos_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [this](std::size_t a, std::size_t b) { return pos_[a] < pos_[b]; });
  return idx;
}

std::string Ranking::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(pos_[i]);
  }
  s += ']';
  return s;
}

Ranking rank_of(std::span<const double> x) {
  if (x.empty()) throw InputError("rank_of: empty vector");
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("rank_of: non-finite entry");
  }
  std::vector<int> pos(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    int above = 0;
    for (double v : x) above += (v > x[i]) ? 1 : 0;
    pos[i] = above + 1;
  }
  return Ranking(std::move(pos));
}

namespace {

// Visits every assignment of components to k ordered, nonempty blocks.
// Block b holds the components tied at the b-th distinct level.
void for_each_block_assignment(int d, int k, std::vector<int>& block, int next,
                               std::vector<int>& used, std::vector<Ranking>& out) {
  if (next == d) {
    if (std::find(used.begin(), used.end(), 0) != used.end()) return;
    std::vector<int> before(static_cast<std::size_t>(k), 0);
    for (int b = 1; b < k; ++b) before[b] = before[b - 1] + used[b - 1];
    std::vector<int> pos(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pos[i] = before[block[i]] + 1;
    out.emplace_back(std::move(pos));
    return;
  }
  for (int b = 0; b < k; ++b) {
    block[next] = b;
    ++used[b];
    for_each_block_assignment(d, k, block, next + 1, used, out);
    --used[b];
  }
}

}  // namespace

std::vector<Ranking> enumerate_rankings(int d) {
  if (d < 1) throw InputError("enumerate_rankings: d must be positive");
  if (d > kMaxEnumerationDimension) {
    throw CapacityError("enumerate_rankings: d = " + std::to_string(d) +
                        " exceeds the maximum of " + std::to_string(kMaxEnumerationDimension));
  }
  std::vector<Ranking> out;
  std::vector<int> block(static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) {
    std::vector<int> used(static_cast<std::size_t>(k), 0);
    for_each_block_assignment(d, k, block, 0, used, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WeakOrder::WeakOrder(int d, std::vector<bool> geq) : d_(d), geq_(std::move(geq)) {
  if (d < 1) throw InputError("weak order dimension must be positive");
  const auto n = static_cast<std::size_t>(d);
  if (geq_.size() != n * n) throw InputError("weak order matrix must be d*d");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!geq_[a * n + b] && !geq_[b * n + a]) {
        throw InputError("weak order is not strongly complete");
      }
      if (!geq_[a * n + b]) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (geq_[b * n + c] && !geq_[a * n + c]) {
          throw InputError("weak order is not transitive");
        }
      }
    }
  }
}

WeakOrder to_weak_order(const Ranking& r) {
  const auto n = static_cast<std::size_t>(r.dimension());
  std::vector<bool> geq(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) geq[a * n + b] = r.position(a) <= r.position(b);
  }
  return WeakOrder(r.dimension(), std::move(geq));
}

Ranking from_weak_order(const WeakOrder& w) {
  const auto n = static_cast<std::size_t>(w.dimension());
  std::vector<int> pos(n);
  for (std::size_t a = 0; a < n; ++a) {
    int not_geq = 0;
    for (std::size_t b = 0; b < n; ++b) not_geq += w.geq(a, b) ? 0 : 1;
    pos[a] = not_geq + 1;
  }
  return Ranking(std::move(pos));
}

RankingIndex::RankingIndex(int d) : d_(d), rankings_(enumerate_rankings(d)) {
  powers_.resize(static_cast<std::size_t>(d));
  std::uint32_t p = 1;
  for (auto& w : powers_) {
    w = p;
    p *= static_cast<std::uint32_t>(d + 1);
  }
  slot_.assign(p, -1);
  for (std::size_t k = 0; k < rankings_.size(); ++k) {
    slot_[code_of(rankings_[k].positions())] = static_cast<std::int32_t>(k);
  }
}

std::uint32_t RankingIndex::code_of(std::span<const int> pos) const noexcept {
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) code += static_cast<std::uint32_t>(pos[i]) * powers_[i];
  return code;
}

std::size_t RankingIndex::index_of(const Ranking& r) const {
  if (r.dimension() != d_) throw InputError("ranking dimension does not match index");
  return static_cast<std::size_t>(slot_[code_of(r.positions())]);
}

std::size_t RankingIndex::index_of_state(std::span<const double> x) const noexcept {
  std::uint32_t code = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t above = 1;
    for (std::size_t j = 0; j < n; ++j) above += (x[j] > x[i]) ? 1U : 0U;
    code += above * powers_[i];
  }
  return static_cast<std::size_t>(slot_[code]);
}

}  // namespace rankproc
