#pragma once

// Exact permutation / derangement counts of a digraph.
//
// A permutation of G maps every vertex either to itself or along an out-edge;
// a derangement is a permutation without fixed points. Three counters with
// increasing reach:
//   count_bruteforce  all n! bijections, n <= 10
//   count_permanent   Ryser permanents of A and A + I, n <= 30
//   count_layered     blow-up subgraphs only, k <= 12, any ell

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dpratio/bigint.hpp"
#include "dpratio/digraph.hpp"

namespace dpratio {

struct CountPair {
  BigInt derangements;
  BigInt permutations;

  /// permutations >= derangements + 1 and 2 * derangements <= permutations.
  bool satisfies_universal_bound() const {
    return permutations >= derangements + 1 && 2 * derangements <= permutations;
  }

  BigRational ratio() const { return BigRational(derangements, permutations); }

  friend bool operator==(const CountPair&, const CountPair&) = default;
};

inline constexpr int kBruteforceMaxVertices = 10;
inline constexpr int kPermanentMaxSize = 30;
inline constexpr int kLayeredMaxPartSize = 12;

inline CountPair count_bruteforce(const Digraph& g) {
  const int n = g.vertex_count();
  require(n <= kBruteforceMaxVertices, "count_bruteforce: n must be <= 10");
  const auto adj = g.adjacency();
  std::vector<int> f(n);
  std::iota(f.begin(), f.end(), 0);
  std::uint64_t perms = 0, ders = 0;
  do {
    bool ok = true, fixes = false;
    for (int v = 0; v < n && ok; ++v) {
      if (f[v] == v)
        fixes = true;
      else if (!adj[v][f[v]])
        ok = false;
    }
    if (ok) {
      ++perms;
      if (!fixes) ++ders;
    }
  } while (std::next_permutation(f.begin(), f.end()));
  return {BigInt(ders), BigInt(perms)};
}

namespace detail {

// 2^n * n * log2(n) bound on the Ryser sum; int128 is safe below this.
inline bool ryser_fits_int128(int n) {
  if (n <= 1) return true;
  return n * (std::log2(static_cast<double>(n)) + 1.0) < 125.0;
}

inline BigInt from_u128(unsigned __int128 v) {
  return BigInt(static_cast<unsigned long long>(v >> 64)) * (BigInt(1) << 64) +
         BigInt(static_cast<unsigned long long>(v));
}

inline BigInt from_i128(__int128 v) {
  return v < 0 ? BigInt(-from_u128(-static_cast<unsigned __int128>(v)))
               : from_u128(static_cast<unsigned __int128>(v));
}

}  // namespace detail

/// Permanent of a square 0/1 matrix by Ryser's inclusion-exclusion, walking
/// column subsets in Gray-code order so each step updates one column of the
/// running row sums.
inline BigInt permanent(const std::vector<std::vector<int>>& a) {
  const int n = static_cast<int>(a.size());
  require(n <= kPermanentMaxSize, "permanent: size must be <= 30");
  for (const auto& row : a) {
    require(static_cast<int>(row.size()) == n, "permanent: matrix must be square");
    for (int x : row) require(x == 0 || x == 1, "permanent: entries must be 0/1");
  }
  if (n == 0) return 1;

  std::vector<int> row_sum(n, 0);
  const std::uint64_t subsets = 1ULL << n;
  const bool small = detail::ryser_fits_int128(n);
  __int128 acc_small = 0;
  BigInt acc_big = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t g = 1; g < subsets; ++g) {
    const int col = std::countr_zero(g);
    const std::uint64_t bit = 1ULL << col;
    const int delta = (gray & bit) ? -1 : 1;
    gray ^= bit;
    for (int i = 0; i < n; ++i) row_sum[i] += delta * a[i][col];

    const bool negative = std::popcount(gray) % 2 == 1;
    if (small) {
      __int128 prod = 1;
      for (int i = 0; i < n && prod != 0; ++i) prod *= row_sum[i];
      acc_small += negative ? -prod : prod;
    } else {
      // flush the int128 partial product before it can overflow
      constexpr __int128 flush_at = static_cast<__int128>(1) << 110;
      BigInt prod = 1;
      __int128 chunk = 1;
      bool zero = false;
      for (int i = 0; i < n; ++i) {
        if (row_sum[i] == 0) {
          zero = true;
          break;
        }
        chunk *= row_sum[i];
        if (chunk > flush_at) {
          prod *= detail::from_i128(chunk);
          chunk = 1;
        }
      }
      if (zero) continue;
      prod *= detail::from_i128(chunk);
      if (negative)
        acc_big -= prod;
      else
        acc_big += prod;
    }
  }
  const BigInt result = small ? detail::from_i128(acc_small) : acc_big;
  return (n % 2 == 1) ? BigInt(-result) : result;
}

/// derangements = per(A), permutations = per(A + I).
inline CountPair count_permanent(const Digraph& g) {
  require(g.vertex_count() <= kPermanentMaxSize, "count_permanent: n must be <= 30");
  auto a = g.adjacency();
  BigInt ders = permanent(a);
  for (int i = 0; i < g.vertex_count(); ++i) a[i][i] = 1;
  return {ders, permanent(a)};
}

namespace detail {

/// Subsets of [0, k) grouped by size, with each mask's rank inside its group.
struct SubsetIndex {
  explicit SubsetIndex(int k) : by_size(k + 1), rank(std::size_t{1} << k) {
    for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
      auto& group = by_size[std::popcount(mask)];
      rank[mask] = static_cast<std::uint32_t>(group.size());
      group.push_back(mask);
    }
  }
  std::vector<std::vector<std::uint32_t>> by_size;
  std::vector<std::uint32_t> rank;
};

/// Perfect-matching counts of one layer between every row set R and column set
/// C of a fixed size s, stored flat as table[rank(R) * groups + rank(C)].
/// Built level by level: expand on the lowest row of R.
inline std::vector<std::uint64_t> next_matching_level(
    const std::vector<std::uint64_t>& prev, int s, const SubsetIndex& idx,
    const SampledSubgraph::Layer& layer) {
  const auto& sets = idx.by_size[s];
  const auto& prev_sets = idx.by_size[s - 1];
  const std::size_t width = sets.size(), prev_width = prev_sets.size();
  std::vector<std::uint64_t> table(width * width, 0);
  for (std::size_t r = 0; r < width; ++r) {
    const std::uint32_t rows = sets[r];
    const int low = std::countr_zero(rows);
    const std::size_t r_rest = idx.rank[rows & (rows - 1)];
    const std::uint32_t reach = static_cast<std::uint32_t>(layer[low]);
    for (std::size_t c = 0; c < width; ++c) {
      std::uint32_t cand = sets[c] & reach;
      std::uint64_t total = 0;
      while (cand) {
        const std::uint32_t bit = cand & (~cand + 1);
        cand ^= bit;
        total += prev[r_rest * prev_width + idx.rank[sets[c] ^ bit]];
      }
      table[r * width + c] = total;
    }
  }
  return table;
}

/// trace(M_0 M_1 ... M_{ell-1}) for square width x width matrices.
inline BigInt trace_of_product(const std::vector<std::vector<std::uint64_t>>& mats,
                               std::size_t width) {
  const std::size_t ell = mats.size();
  if (ell == 2) {
    unsigned __int128 sum = 0;
    const auto& a = mats[0];
    const auto& b = mats[1];
    for (std::size_t x = 0; x < width; ++x)
      for (std::size_t y = 0; y < width; ++y)
        sum += static_cast<unsigned __int128>(a[x * width + y]) * b[y * width + x];
    return from_u128(sum);
  }
  std::vector<BigInt> acc(width * width);
  for (std::size_t t = 0; t < width * width; ++t) acc[t] = mats[0][t];
  std::vector<BigInt> next(width * width);
  for (std::size_t c = 1; c + 1 < ell; ++c) {
    const auto& m = mats[c];
    for (auto& v : next) v = 0;
    for (std::size_t x = 0; x < width; ++x)
      for (std::size_t z = 0; z < width; ++z) {
        const BigInt& lhs = acc[x * width + z];
        if (lhs == 0) continue;
        for (std::size_t y = 0; y < width; ++y) {
          const std::uint64_t rhs = m[z * width + y];
          if (rhs) mpz_addmul_ui(next[x * width + y].backend().data(), lhs.backend().data(), rhs);
        }
      }
    acc.swap(next);
  }
  const auto& last = mats[ell - 1];
  BigInt tr = 0;
  for (std::size_t x = 0; x < width; ++x)
    for (std::size_t y = 0; y < width; ++y) {
      const std::uint64_t rhs = last[y * width + x];
      if (rhs) mpz_addmul_ui(tr.backend().data(), acc[x * width + y].backend().data(), rhs);
    }
  return tr;
}

}  // namespace detail

/// Counts on a blow-up subgraph using its layer structure. Every permutation
/// fixes the same number i of vertices in each part; the moved vertices of
/// consecutive parts are joined by a perfect matching of the layer between
/// them. So the permutations fixing i per part contribute
/// trace(T_1 ... T_ell), T_c[R][R'] = #perfect matchings of layer c between
/// moved sets R in part c and R' in part c+1 (|R| = |R'| = k - i). The i = 0
/// term is the derangement count.
inline CountPair count_layered(const SampledSubgraph& g) {
  const int k = g.base().k();
  const int ell = g.base().ell();
  require(k <= kLayeredMaxPartSize, "count_layered: k must be <= 12");
  const detail::SubsetIndex idx(k);

  std::vector<std::vector<std::uint64_t>> level(ell, std::vector<std::uint64_t>{1});
  BigInt perms = 1;  // s = 0: the identity
  for (int s = 1; s <= k; ++s) {
    for (int c = 0; c < ell; ++c)
      level[c] = detail::next_matching_level(level[c], s, idx, g.layer(c));
    perms += detail::trace_of_product(level, idx.by_size[s].size());
  }
  BigInt ders = 1;
  for (int c = 0; c < ell; ++c) ders *= level[c][0];
  return {ders, perms};
}

/// Closed forms for the full blow-up: (k!)^ell derangements and
/// sum_i (C(k,i) (k-i)!)^ell permutations.
inline CountPair closed_form_counts(int k, int ell) {
  require(k >= 1, "closed_form_counts: k must be >= 1");
  require(ell >= 2, "closed_form_counts: ell must be >= 2");
  CountPair out{pow(factorial(k), ell), 0};
  for (int i = 0; i <= k; ++i) out.permutations += pow(binomial(k, i) * factorial(k - i), ell);
  return out;
}

inline BigRational closed_form_ratio(int k, int ell) {
  return closed_form_counts(k, ell).ratio();
}

/// Same ratio through 1 / sum_{i<=k} (1/i!)^ell.
inline BigRational closed_form_ratio_series(int k, int ell) {
  require(k >= 1 && ell >= 2, "closed_form_ratio_series: need k >= 1, ell >= 2");
  BigRational s = 0;
  for (int i = 0; i <= k; ++i) s += BigRational(1, pow(factorial(i), ell));
  return 1 / s;
}

}  // namespace dpratio
