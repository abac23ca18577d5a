#include "afembed/divisibility.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace afembed {

namespace {

constexpr std::int64_t kMaxResidueTable = std::int64_t(1) << 22;
constexpr std::int64_t kMaxCoinValue = std::int64_t(1) << 31;
constexpr std::size_t kMaxCoverColumns = 12;
constexpr std::size_t kMaxCoverRows = 256;
constexpr std::int64_t kMaxEntryScan = 1 << 20;

// Extended gcd on big integers: g = gcd(a,b), g = a*x + b*y.
Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  Int x1, y1;
  Int g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// Smallest v >= vmin with v*m == r (mod mod), or nullopt.  mod >= 1.
std::optional<Int> smallest_congruent(const Int& m, const Int& r, const Int& mod,
                                      const Int& vmin) {
  if (mod == 1) return vmin;
  Int x, y;
  const Int g = ext_gcd(m % mod, mod, x, y);
  if (r % g != 0) return std::nullopt;
  const Int step = mod / g;
  // v0 = (r/g) * x mod step, normalized into [0, step).
  Int v0 = ((r / g) % step) * (x % step) % step;
  if (v0 < 0) v0 += step;
  if (v0 >= vmin) return v0;
  const Int k = (vmin - v0 + step - 1) / step;
  return v0 + k * step;
}

// Membership oracle for { sum_e x_e * coins_e : x_e >= 0 integers }.
class CoinSet {
 public:
  CoinSet() = default;  // empty set: only 0 is representable

  explicit CoinSet(std::vector<Int> coins) : coins_(std::move(coins)) {
    if (coins_.empty()) return;
    if (coins_.size() == 1) {
      single_ = coins_[0];
      return;
    }
    // Residue table indexed mod the smallest coin.  dist[r] is the least
    // representable value congruent to r; values x are representable iff
    // dist[x mod m0] is finite and <= x.
    Int m0big = coins_[0];
    for (const Int& c : coins_) {
      if (c > kMaxCoinValue) {
        fail(ErrorCode::ScaleLimit, "source entry too large for the residue table");
      }
      m0big = std::min(m0big, c);
    }
    if (m0big > kMaxResidueTable) {
      fail(ErrorCode::ScaleLimit, "smallest source entry too large for the residue table");
    }
    const std::int64_t m0 = static_cast<std::int64_t>(m0big);
    m0_ = m0;
    g_ = 0;
    std::vector<std::int64_t> small;
    small.reserve(coins_.size());
    for (const Int& c : coins_) {
      const std::int64_t ci = static_cast<std::int64_t>(c);
      small.push_back(ci);
      g_ = g_ == 0 ? ci : std::gcd(g_, ci);
    }
    dist_.assign(static_cast<std::size_t>(m0), -1);
    using Node = std::pair<std::int64_t, std::int64_t>;  // (value, residue)
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
    dist_[0] = 0;
    pq.emplace(0, 0);
    while (!pq.empty()) {
      const auto [d, r] = pq.top();
      pq.pop();
      if (d != dist_[static_cast<std::size_t>(r)]) continue;
      for (const std::int64_t c : small) {
        if (c == m0) continue;
        const std::int64_t nr = (r + c) % m0;
        const std::int64_t nd = d + c;
        auto& slot = dist_[static_cast<std::size_t>(nr)];
        if (slot < 0 || nd < slot) {
          slot = nd;
          pq.emplace(nd, nr);
        }
      }
    }
    maxdist_ = 0;
    for (const std::int64_t d : dist_) maxdist_ = std::max(maxdist_, d);
  }

  bool empty_set() const { return coins_.empty(); }

  bool contains(const Int& x) const {
    if (x < 0) return false;
    if (coins_.empty()) return x == 0;
    if (coins_.size() == 1) return x % single_ == 0;
    const std::int64_t r = static_cast<std::int64_t>(x % m0_);
    const std::int64_t d = dist_[static_cast<std::size_t>(r)];
    return d >= 0 && x >= d;
  }

  // Smallest v >= vmin with (budget - v*m) representable, or nullopt.
  std::optional<Int> smallest_coeff(const Int& budget, const Int& m, const Int& vmin) const {
    if (m < 1 || vmin < 0) fail(ErrorCode::Internal, "bad coefficient search");
    const Int maxv = budget / m;  // below this x(v) < 0
    if (budget < 0 || maxv < vmin) return std::nullopt;
    if (coins_.empty()) {
      if (budget % m != 0) return std::nullopt;
      const Int v = budget / m;
      return v >= vmin ? std::optional<Int>(v) : std::nullopt;
    }
    if (coins_.size() == 1) {
      // Need budget - v*m == 0 (mod single): v*m == budget (mod single).
      auto v = smallest_congruent(m, budget % single_, single_, vmin);
      if (v && *v <= maxv) return v;
      return std::nullopt;
    }
    // Zone A: x(v) > maxdist, membership is exactly divisibility by g.
    const Int bound = maxdist_;
    if (budget - vmin * m > bound) {
      const Int vA_max = (budget - bound - 1) / m;
      auto v = smallest_congruent(m, budget % g_, Int(g_), vmin);
      if (v && *v <= vA_max) return v;
    }
    // Zone B: x(v) <= maxdist; short scan against the table.
    Int v = vmin;
    if (budget - vmin * m > bound) {
      v = (budget - bound + m - 1) / m;  // first v with x(v) <= bound
    }
    std::int64_t steps = 0;
    for (; v <= maxv; ++v) {
      if (++steps > kMaxEntryScan) {
        fail(ErrorCode::ScaleLimit, "witness coefficient scan exceeded the scale guard");
      }
      if (contains(budget - v * m)) return v;
    }
    return std::nullopt;
  }

 private:
  std::vector<Int> coins_;
  Int single_ = 0;
  std::int64_t m0_ = 0;
  std::int64_t g_ = 0;
  std::int64_t maxdist_ = 0;
  std::vector<std::int64_t> dist_;
};

// Shared state for the witness search over gamma with gamma * m = n, every
// column positive.  Rows are independent up to the coverage constraint,
// which is resolved by a memoized search over which rows newly cover which
// columns.
struct WitnessSearch {
  const std::vector<Int>& m;
  const std::vector<Int>& n;
  std::vector<CoinSet> suffix;  // suffix[j] = coins m_j..m_{s-1}; suffix[s] empty
  std::uint32_t full_mask = 0;
  // rows_ok memo: 0 unknown, 1 false, 2 true, indexed [row][covered mask]
  std::vector<std::vector<std::uint8_t>> memo;

  WitnessSearch(const std::vector<Int>& mm, const std::vector<Int>& nn) : m(mm), n(nn) {
    const std::size_t s = m.size();
    if (s > kMaxCoverColumns) {
      fail(ErrorCode::ScaleLimit, "source has too many blocks for the coverage search");
    }
    if (n.size() > kMaxCoverRows) {
      fail(ErrorCode::ScaleLimit, "target has too many blocks for the coverage search");
    }
    suffix.resize(s + 1);
    for (std::size_t j = 0; j < s; ++j) {
      suffix[j] = CoinSet(std::vector<Int>(m.begin() + j, m.end()));
    }
    suffix[s] = CoinSet();
    full_mask = (std::uint32_t(1) << s) - 1;
    memo.assign(n.size() + 1, std::vector<std::uint8_t>(full_mask + 1, 0));
  }

  Int subset_cost(std::uint32_t mask) const {
    Int c = 0;
    for (std::size_t e = 0; e < m.size(); ++e) {
      if (mask & (std::uint32_t(1) << e)) c += m[e];
    }
    return c;
  }

  // Rows q..end can satisfy their sum equations while newly covering every
  // column outside `covered`.
  bool rows_ok(std::size_t q, std::uint32_t covered) {
    if (q == n.size()) return covered == full_mask;
    std::uint8_t& slot = memo[q][covered];
    if (slot) return slot == 2;
    bool ok = false;
    const std::uint32_t rem = full_mask & ~covered;
    // Iterate all subsets of rem, including 0.
    std::uint32_t sub = rem;
    while (true) {
      const Int rest = n[q] - subset_cost(sub);
      if (rest >= 0 && suffix[0].contains(rest) && rows_ok(q + 1, covered | sub)) {
        ok = true;
        break;
      }
      if (sub == 0) break;
      sub = (sub - 1) & rem;
    }
    slot = ok ? 2 : 1;
    return ok;
  }

  // Can the tail of row r (columns j..s-1, remaining budget) be completed,
  // with rows r+1.. finishing the coverage?
  bool tail_ok(std::size_t r, std::size_t j, const Int& budget, std::uint32_t covered) {
    if (budget < 0) return false;
    const std::uint32_t rem = free_tail_mask(j) & ~covered;
    std::uint32_t sub = rem;
    while (true) {
      const Int rest = budget - subset_cost(sub);
      if (rest >= 0 && suffix[j].contains(rest) && rows_ok(r + 1, covered | sub)) {
        return true;
      }
      if (sub == 0) break;
      sub = (sub - 1) & rem;
    }
    return false;
  }

  // Smallest entry value at (r, j) given the remaining row budget, or
  // nullopt.  vmin distinguishes the enumeration of strictly positive
  // candidates from the v = 0 case, which is a plain tail check.
  std::optional<Int> smallest_entry(std::size_t r, std::size_t j, const Int& budget,
                                    std::uint32_t covered) {
    if (tail_ok(r, j + 1, budget, covered)) return Int(0);
    std::optional<Int> best;
    const std::uint32_t jbit = std::uint32_t(1) << j;
    const std::uint32_t rem = free_tail_mask(j + 1) & ~(covered | jbit);
    std::uint32_t sub = rem;
    while (true) {
      if (rows_ok_after(r, covered | jbit | sub)) {
        const Int budget2 = budget - subset_cost(sub);
        auto v = suffix[j + 1].smallest_coeff(budget2, m[j], Int(1));
        if (v && (!best || *v < *best)) best = v;
        if (best && *best == 1) break;  // v >= 1 cannot improve below 1
      }
      if (sub == 0) break;
      sub = (sub - 1) & rem;
    }
    return best;
  }

  bool rows_ok_after(std::size_t r, std::uint32_t covered) { return rows_ok(r + 1, covered); }

  std::uint32_t free_tail_mask(std::size_t j) const {
    std::uint32_t mask = 0;
    for (std::size_t e = j; e < m.size(); ++e) mask |= std::uint32_t(1) << e;
    return mask;
  }
};

MappingMatrix single_column_witness(const DimensionVector& m, const DimensionVector& n,
                                    bool& ok) {
  MappingMatrix gamma(n.size(), 1);
  ok = true;
  for (std::size_t r = 0; r < n.size(); ++r) {
    if (n[r] % m[0] != 0) {
      ok = false;
      return gamma;
    }
    gamma.at(r, 0) = n[r] / m[0];
  }
  return gamma;
}

}  // namespace

std::optional<MappingMatrix> divides(const DimensionVector& m, const DimensionVector& n) {
  if (m.size() == 1) {
    bool ok = false;
    MappingMatrix gamma = single_column_witness(m, n, ok);
    if (!ok) return std::nullopt;
    return gamma;
  }

  WitnessSearch search(m.entries, n.entries);
  if (!search.rows_ok(0, 0)) return std::nullopt;

  const std::size_t s = m.size();
  MappingMatrix gamma(n.size(), s);
  std::uint32_t covered = 0;
  for (std::size_t r = 0; r < n.size(); ++r) {
    Int budget = n[r];
    for (std::size_t j = 0; j < s; ++j) {
      auto v = search.smallest_entry(r, j, budget, covered);
      if (!v) fail(ErrorCode::Internal, "witness construction lost feasibility");
      gamma.at(r, j) = *v;
      budget -= *v * m[j];
      if (*v > 0) covered |= std::uint32_t(1) << j;
    }
    if (budget != 0) fail(ErrorCode::Internal, "witness row does not balance");
  }
  if (!(gamma.apply(m) == n) || !gamma.col_positive() || !gamma.row_positive()) {
    fail(ErrorCode::Internal, "constructed witness fails validation");
  }
  return gamma;
}

std::vector<MappingMatrix> enumerate_witnesses(const DimensionVector& m,
                                               const DimensionVector& n,
                                               std::size_t limit) {
  std::vector<MappingMatrix> out;
  if (m.size() == 1) {
    bool ok = false;
    MappingMatrix gamma = single_column_witness(m, n, ok);
    if (ok) out.push_back(std::move(gamma));
    return out;
  }

  WitnessSearch search(m.entries, n.entries);
  if (!search.rows_ok(0, 0)) return out;

  const std::size_t s = m.size();
  const std::size_t rows = n.size();
  MappingMatrix gamma(rows, s);

  // DFS in row-major entry order, ascending values, pruned by tail
  // feasibility, so results appear in lexicographic order.
  std::function<bool(std::size_t, std::size_t, Int, std::uint32_t)> dfs =
      [&](std::size_t r, std::size_t j, Int budget, std::uint32_t covered) -> bool {
    if (r == rows) {
      out.push_back(gamma);
      return limit != 0 && out.size() >= limit;
    }
    if (j == s) {
      if (budget != 0) return false;
      return dfs(r + 1, 0, r + 1 < rows ? n[r + 1] : Int(0), covered);
    }
    const Int maxv = budget / m[j];
    if (maxv > kMaxEntryScan) {
      fail(ErrorCode::ScaleLimit, "witness enumeration range exceeds the scale guard");
    }
    for (Int v = 0; v <= maxv; ++v) {
      const Int rest = budget - v * m[j];
      const std::uint32_t cov2 = covered | (v > 0 ? (std::uint32_t(1) << j) : 0);
      if (!search.tail_ok(r, j + 1, rest, cov2)) continue;
      gamma.at(r, j) = v;
      if (dfs(r, j + 1, rest, cov2)) return true;
    }
    gamma.at(r, j) = 0;
    return false;
  };
  dfs(0, 0, n[0], 0);
  return out;
}

std::vector<std::vector<Int>> enumerate_row_solutions(const Int& total,
                                                      const std::vector<Int>& coins,
                                                      std::size_t limit) {
  if (coins.empty()) fail(ErrorCode::InvalidDimension, "row enumeration needs coins");
  for (const Int& c : coins) {
    if (c < 1) fail(ErrorCode::InvalidDimension, "coins must be >= 1");
  }
  std::vector<CoinSet> suffix(coins.size() + 1);
  for (std::size_t j = 0; j < coins.size(); ++j) {
    suffix[j] = CoinSet(std::vector<Int>(coins.begin() + j, coins.end()));
  }
  suffix[coins.size()] = CoinSet();

  std::vector<std::vector<Int>> out;
  std::vector<Int> x(coins.size(), Int(0));
  std::function<bool(std::size_t, Int)> dfs = [&](std::size_t j, Int rest) -> bool {
    if (j == coins.size()) {
      if (rest != 0) return false;
      out.push_back(x);
      return limit != 0 && out.size() >= limit;
    }
    const Int maxv = rest / coins[j];
    if (maxv > kMaxEntryScan) {
      fail(ErrorCode::ScaleLimit, "row enumeration range exceeds the scale guard");
    }
    for (Int v = 0; v <= maxv; ++v) {
      const Int r2 = rest - v * coins[j];
      if (!suffix[j + 1].contains(r2)) continue;
      x[j] = v;
      if (dfs(j + 1, r2)) return true;
    }
    x[j] = 0;
    return false;
  };
  dfs(0, total);
  return out;
}

}  // namespace afembed
