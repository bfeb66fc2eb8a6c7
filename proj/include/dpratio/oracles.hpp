#pragma once

// Brute-force reference computations. Each one works straight from a
// definition and shares no code path with the routine it is used to check.

#include <algorithm>
#include <numeric>
#include <vector>

#include "dpratio/bigint.hpp"
#include "dpratio/count.hpp"
#include "dpratio/digraph.hpp"

namespace dpratio::oracle {

/// Perfect matchings of K_{a,a} (permutations s of [a]) avoiding the fixed
/// b-edge matching {i -> i : i < b}.
inline BigInt matchings_avoiding(int a, int b) {
  std::vector<int> s(a);
  std::iota(s.begin(), s.end(), 0);
  long count = 0;
  do {
    bool ok = true;
    for (int i = 0; i < b && ok; ++i) ok = s[i] != i;
    if (ok) ++count;
  } while (std::next_permutation(s.begin(), s.end()));
  return count;
}

/// Permanent by expansion over all n! permutations.
inline BigInt naive_permanent(const std::vector<std::vector<int>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> s(n);
  std::iota(s.begin(), s.end(), 0);
  BigInt total = 0;
  do {
    long prod = 1;
    for (int i = 0; i < n && prod; ++i) prod *= a[i][s[i]];
    total += prod;
  } while (std::next_permutation(s.begin(), s.end()));
  return total;
}

/// C(a - x, b - x) / C(a, b) from big-integer binomials.
inline BigRational binomial_ratio(long a, long b, long x) {
  return BigRational(binomial(a - x, b - x), binomial(a, b));
}

struct EnumeratedMoments {
  BigRational ex, ey, ex2, ey2;
  long graphs = 0;
};

/// Averages X, Y, X^2, Y^2 over every m-edge subgraph of D_{k,ell}, counting
/// each graph by brute force over all bijections.
inline EnumeratedMoments enumerate_moments(int k, int ell, long m) {
  BigInt sx = 0, sy = 0, sx2 = 0, sy2 = 0;
  long graphs = 0;
  enumerate_subgraphs(build_blowup(k, ell), m, [&](const SampledSubgraph& g) {
    const CountPair c = count_bruteforce(to_general(g));
    sx += c.derangements;
    sy += c.permutations;
    sx2 += c.derangements * c.derangements;
    sy2 += c.permutations * c.permutations;
    ++graphs;
  });
  const BigInt n = graphs;
  return {BigRational(sx, n), BigRational(sy, n), BigRational(sx2, n), BigRational(sy2, n), graphs};
}

}  // namespace dpratio::oracle
