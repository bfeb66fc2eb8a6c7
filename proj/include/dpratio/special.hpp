#pragma once

// The special functions behind the construction:
//   f_ell(x) = sum_{i>=0} x^{i ell} / (i!)^ell        (entire series)
//   h(a, b)  = sum_{w<=b} (-1)^w C(b,w) (a-w)!       (matchings of K_{a,a}
//                                                    avoiding a b-edge matching)
//   (b)_x / (a)_x = C(a-x, b-x) / C(a, b)            (all x fixed edges survive
//                                                    a uniform b-of-a draw)

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dpratio/bigint.hpp"

namespace dpratio {

using Real = long double;
using WideReal = boost::multiprecision::cpp_bin_float_50;

inline constexpr Real kDefaultSeriesTol = 1e-15L;

struct SeriesValue {
  Real value = 0;
  int truncation_index = 0;  // last term included
  Real tail_bound = 0;       // bound on the omitted remainder
};

/// Partial sum of f_ell(x). Stops at the first N where the terms from N+1 on
/// shrink at least geometrically with ratio q <= 1/2 and the remainder bound
/// t_{N+1} / (1 - q) is below tol / 2.
inline SeriesValue f_eval(int ell, Real x, Real tol = kDefaultSeriesTol) {
  require(ell >= 1, "f_eval: ell must be >= 1");
  require(x >= 0, "f_eval: x must be >= 0");
  require(tol > 0, "f_eval: tol must be positive");
  SeriesValue out;
  Real term = 1;  // (x^i / i!)^ell at i = truncation_index
  out.value = term;
  for (int i = 0;; ++i) {
    const Real next = term * std::pow(x / (i + 1), static_cast<Real>(ell));
    const Real q = std::pow(x / (i + 2), static_cast<Real>(ell));
    if (q <= 0.5L) {
      const Real tail = next / (1 - q);
      if (next < tol / 2 && tail < tol / 2) {
        out.truncation_index = i;
        out.tail_bound = tail;
        return out;
      }
    }
    term = next;
    out.value += term;
  }
}

struct Bounds {
  Real lower;
  Real upper;
  bool contains(Real v, Real slack = 0) const { return v >= lower - slack && v <= upper + slack; }
};

/// 2 <= f_ell(1) <= 2 + 1 / (2^ell - 1), from (1/i!)^ell <= (1/2^{i-1})^ell.
inline Bounds f_at_one_bounds(int ell) {
  require(ell >= 1, "f_at_one_bounds: ell must be >= 1");
  return {2.0L, 2.0L + 1.0L / (std::ldexp(1.0L, ell) - 1.0L)};
}

inline BigInt h_exact(long a, long b) {
  require(a >= 0 && b >= 0 && b <= a, "h_exact: need 0 <= b <= a");
  BigInt sum = 0;
  for (long w = 0; w <= b; ++w) {
    const BigInt term = binomial(b, w) * factorial(a - w);
    if (w % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  return sum;
}

/// Table h[a][b] for 0 <= b <= a <= a_max.
inline std::vector<std::vector<BigInt>> h_table(long a_max) {
  std::vector<std::vector<BigInt>> t(a_max + 1);
  for (long a = 0; a <= a_max; ++a) {
    t[a].reserve(a + 1);
    for (long b = 0; b <= a; ++b) t[a].push_back(h_exact(a, b));
  }
  return t;
}

inline bool in_h_window(long a, long b) {
  return a >= 1 && b <= a && static_cast<Real>(b) >= a - std::pow(static_cast<Real>(a), 0.1L);
}

/// Leading-order a!/e, valid for a - a^{1/10} <= b <= a. Diagnostics only.
inline Real h_asymptotic(long a, long b) {
  require(in_h_window(a, b), "h_asymptotic: need a >= 1 and a - a^(1/10) <= b <= a");
  return std::exp(std::lgamma(static_cast<Real>(a) + 1) - 1);
}

/// e * h(a, b) / a! - 1, in 50-digit arithmetic.
inline WideReal h_relative_error(long a, long b) {
  const BigRational q(h_exact(a, b), factorial(a));
  const WideReal ratio = WideReal(BigInt(boost::multiprecision::numerator(q)).str()) /
                         WideReal(BigInt(boost::multiprecision::denominator(q)).str());
  return ratio * boost::multiprecision::exp(WideReal(1)) - 1;
}

/// (b)_x / (a)_x as an exact rational.
inline BigRational falling_ratio_exact(long a, long b, long x) {
  require(0 <= x && x <= b && b <= a, "falling_ratio_exact: need 0 <= x <= b <= a");
  return BigRational(falling(b, x), falling(a, x));
}

/// (b/a)^x exp{(x^2/2)(1/a - 1/b)}, the explicit part of the expansion.
inline Real falling_ratio_asymptotic(long a, long b, long x) {
  require(0 <= x && x <= b && b <= a && b > 0,
          "falling_ratio_asymptotic: need 0 <= x <= b <= a, b > 0");
  const Real ra = static_cast<Real>(a), rb = static_cast<Real>(b), rx = static_cast<Real>(x);
  return std::exp(rx * std::log(rb / ra) + rx * rx / 2 * (1 / ra - 1 / rb));
}

/// Probability that x prescribed edges of D_{k,ell} all lie in G_{k,ell}(m).
inline BigRational edge_prob_exact(long k, long ell, long m, long x) {
  const long total = k * k * ell;
  require(0 <= m && m <= total, "edge_prob_exact: m out of range");
  require(0 <= x && x <= total, "edge_prob_exact: x out of range");
  if (x > m) return 0;
  return falling_ratio_exact(total, m, x);
}

/// Edge-survival probabilities (m)_x / (N)_x for all x <= x_max, expressed as
/// integer numerators over the common denominator (N)_{x_max}. Lets moment sums
/// accumulate in integers and divide once.
class EdgeProbabilityKernel {
 public:
  EdgeProbabilityKernel(long total, long m, long x_max)
      : denominator_(falling(total, x_max)), numerators_(x_max + 1) {
    require(0 <= m && m <= total && 0 <= x_max && x_max <= total,
            "EdgeProbabilityKernel: bad arguments");
    // numerators_[x] = (m)_x * (total - x)_{x_max - x}
    std::vector<BigInt> suffix(x_max + 2, 1);
    for (long x = x_max - 1; x >= 0; --x) suffix[x] = suffix[x + 1] * (total - x);
    BigInt head = 1;
    for (long x = 0; x <= x_max; ++x) {
      numerators_[x] = (x <= m) ? BigInt(head * suffix[x]) : BigInt(0);
      if (x < x_max) head *= (m - x);
    }
  }

  const BigInt& numerator(long x) const { return numerators_.at(x); }
  const BigInt& denominator() const { return denominator_; }
  BigRational probability(long x) const { return BigRational(numerator(x), denominator_); }

 private:
  BigInt denominator_;
  std::vector<BigInt> numerators_;
};

}  // namespace dpratio
