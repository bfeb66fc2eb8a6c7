#pragma once

// Exact and asymptotic moments of X (derangements) and Y (permutations) in
// G_{k,ell}(m), the uniform m-edge subgraph of D_{k,ell}.
//
// Every exact moment is a sum over edge sets of size x weighted by the
// survival probability (m)_x / (N)_x, N = k^2 ell. Sums are accumulated as
// integers over the common denominator (N)_{x_max} and divided once.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpratio/bigint.hpp"
#include "dpratio/params.hpp"
#include "dpratio/special.hpp"

namespace dpratio {

inline constexpr int kFirstMomentMaxK = 40;
inline constexpr int kSecondMomentMaxK = 25;
inline constexpr int kSecondMomentMaxEll = 4;

namespace detail {

inline void require_model(long k, long ell, long m) {
  require(k >= 1 && ell >= 2, "moments: need k >= 1 and ell >= 2");
  require(0 <= m && m <= k * k * ell, "moments: m out of range [0, k^2 ell]");
}

/// Coefficients of (sum_t seq[t] z^t)^power.
inline std::vector<BigInt> poly_pow(const std::vector<BigInt>& seq, int power) {
  std::vector<BigInt> acc{1};
  for (int e = 0; e < power; ++e) {
    std::vector<BigInt> next(acc.size() + seq.size() - 1);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      if (acc[a] == 0) continue;
      for (std::size_t t = 0; t < seq.size(); ++t)
        if (seq[t] != 0) next[a + t] += acc[a] * seq[t];
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace detail

/// E[X] = (k!)^ell (m)_{k ell} / (N)_{k ell}.
inline BigRational expected_x_exact(long k, long ell, long m) {
  detail::require_model(k, ell, m);
  return BigRational(pow(factorial(k), ell)) * edge_prob_exact(k, ell, m, k * ell);
}

/// E[Y] = sum_i (C(k,i) (k-i)!)^ell P[(k-i) ell given edges survive].
inline BigRational expected_y_exact(long k, long ell, long m) {
  detail::require_model(k, ell, m);
  const EdgeProbabilityKernel kernel(k * k * ell, m, k * ell);
  BigInt acc = 0;
  for (long i = 0; i <= k; ++i)
    acc += pow(binomial(k, i) * factorial(k - i), ell) * kernel.numerator((k - i) * ell);
  return BigRational(acc, kernel.denominator());
}

/// E[X^2] = (k!)^ell sum_b P[2k ell - b edges survive] [z^b] G(z)^ell, with
/// G(z) = sum_t C(k,t) h(k-t, k-t) z^t: a second derangement sharing t edges
/// of layer c with a fixed one picks those t edges, then a perfect matching of
/// the rest avoiding the fixed derangement's remaining edges.
inline BigRational second_moment_x_exact(long k, long ell, long m) {
  detail::require_model(k, ell, m);
  const long total = k * k * ell;
  const long x_max = std::min(2 * k * ell, total);
  const EdgeProbabilityKernel kernel(total, m, x_max);
  std::vector<BigInt> g(k + 1);
  for (long t = 0; t <= k; ++t) g[t] = binomial(k, t) * h_exact(k - t, k - t);
  const auto coef = detail::poly_pow(g, static_cast<int>(ell));
  BigInt acc = 0;
  for (long b = 0; b < static_cast<long>(coef.size()); ++b) {
    const long x = 2 * k * ell - b;
    if (x > m || coef[b] == 0) continue;
    acc += coef[b] * kernel.numerator(x);
  }
  return BigRational(pow(factorial(k), ell) * acc, kernel.denominator());
}

/// Upper bound on E[Y^2] over pairs (P, P') where P fixes i vertices per part,
/// P' fixes j per part, and they share b_c edges in layer c:
///   sum_{i,j,b} P[2k ell - (i+j) ell - b edges survive] (k!/i!)^ell
///     [z^b] (sum_t C(k-i,t) C(k-t,j) h(k-j-t, max(0, k-i-t-2j)) z^t)^ell.
/// h(a, .) is nonincreasing in its second argument, so clamping a negative
/// forbidden-edge count at 0 keeps the bound valid.
inline BigRational second_moment_y_upper(long k, long ell, long m) {
  detail::require_model(k, ell, m);
  const long total = k * k * ell;
  const long x_max = std::min(2 * k * ell, total);
  const EdgeProbabilityKernel kernel(total, m, x_max);
  const auto h = h_table(k);
  BigInt acc = 0;
  for (long i = 0; i <= k; ++i) {
    const BigInt choices_p = pow(binomial(k, i) * factorial(k - i), ell);
    for (long j = 0; j <= k; ++j) {
      std::vector<BigInt> g(k - i + 1);
      for (long t = 0; t <= k - i; ++t) {
        const long a = k - j - t;
        if (a < 0) continue;
        const long forbidden = std::max(0L, k - i - t - 2 * j);
        g[t] = binomial(k - i, t) * binomial(k - t, j) * h[a][forbidden];
      }
      const auto coef = detail::poly_pow(g, static_cast<int>(ell));
      BigInt inner = 0;
      for (long b = 0; b < static_cast<long>(coef.size()); ++b) {
        const long x = 2 * k * ell - (i + j) * ell - b;
        if (x > m || coef[b] == 0) continue;
        inner += coef[b] * kernel.numerator(x);
      }
      acc += choices_p * inner;
    }
  }
  return BigRational(acc, kernel.denominator());
}

/// A positive real kept as its natural log, for values far outside the
/// floating-point range.
struct Magnitude {
  Real log_value = -std::numeric_limits<Real>::infinity();
  Real value() const { return std::exp(log_value); }
};

/// E[X] ~ (k!)^ell p^{k ell} exp{(ell/2)(1 - 1/p)}.
inline Magnitude expected_x_asymptotic(long k, long ell, Real p) {
  require(k >= 1 && ell >= 2, "expected_x_asymptotic: need k >= 1, ell >= 2");
  require(p > 0 && p <= 1, "expected_x_asymptotic: need 0 < p <= 1");
  const Real kl = static_cast<Real>(k * ell);
  return {ell * std::lgamma(static_cast<Real>(k) + 1) + kl * std::log(p) +
          static_cast<Real>(ell) / 2 * (1 - 1 / p)};
}

/// E[Y] ~ E[X]-asymptotic times f_ell(1/p).
inline Magnitude expected_y_asymptotic(long k, long ell, Real p) {
  const Magnitude x = expected_x_asymptotic(k, ell, p);
  return {x.log_value + std::log(f_eval(static_cast<int>(ell), 1 / p).value)};
}

/// exact / asymptotic, for exact values of any size.
inline Real ratio_to_asymptotic(const BigRational& exact, const Magnitude& asym) {
  if (exact == 0) return 0;
  return std::exp(log_of(exact) - asym.log_value);
}

struct MomentReport {
  ConstructionPlan plan;
  BigRational ex, ey, ex2, ey2_upper;
  Magnitude ex_asym, ey_asym;
  BigRational ratio_exact;
  Real x_concentration = std::numeric_limits<Real>::quiet_NaN();
  Real y_concentration_bound = std::numeric_limits<Real>::quiet_NaN();

  /// Density the exact model actually has after rounding m.
  Real effective_p() const {
    return static_cast<Real>(plan.m) / static_cast<Real>(plan.edge_total());
  }
};

/// All moments for one plan. Asymptotic fields are evaluated at the effective
/// density m / (k^2 ell) so that they describe the same model as the exact ones.
inline MomentReport moment_report(const ConstructionPlan& pl) {
  require(pl.k >= 1 && pl.ell >= 2, "moment_report: need k >= 1 and ell >= 2");
  require(pl.m > 0 && pl.m <= pl.edge_total(), "moment_report: m out of range (0, k^2 ell]");
  require(pl.k <= kFirstMomentMaxK,
          "moment_report: ex/ey exceed the exact-computation budget (k <= 40)");
  require(pl.k <= kSecondMomentMaxK && pl.ell <= kSecondMomentMaxEll,
          "moment_report: ex2/ey2_upper exceed the exact-computation budget "
          "(k <= 25, ell <= 4)");
  MomentReport rep;
  rep.plan = pl;
  rep.ex = expected_x_exact(pl.k, pl.ell, pl.m);
  rep.ey = expected_y_exact(pl.k, pl.ell, pl.m);
  rep.ex2 = second_moment_x_exact(pl.k, pl.ell, pl.m);
  rep.ey2_upper = second_moment_y_upper(pl.k, pl.ell, pl.m);
  rep.ex_asym = expected_x_asymptotic(pl.k, pl.ell, rep.effective_p());
  rep.ey_asym = expected_y_asymptotic(pl.k, pl.ell, rep.effective_p());
  rep.ratio_exact = rep.ex / rep.ey;
  if (rep.ex > 0) rep.x_concentration = to_real(BigRational(rep.ex2 / (rep.ex * rep.ex) - 1));
  rep.y_concentration_bound = to_real(BigRational(rep.ey2_upper / (rep.ey * rep.ey) - 1));
  return rep;
}

/// Plan for explicit (k, ell, m): p = m / (k^2 ell), x = 1/p, and r set to the
/// limiting ratio 1 / f_ell(1/p) that density implies.
inline ConstructionPlan plan_for_model(int k, int ell, long m) {
  detail::require_model(k, ell, m);
  require(m > 0, "plan_for_model: m must be positive");
  ConstructionPlan pl;
  pl.k = k;
  pl.ell = ell;
  pl.m = m;
  pl.p = static_cast<double>(m) / static_cast<double>(pl.edge_total());
  pl.x = 1 / pl.p;
  pl.r = static_cast<double>(1 / f_eval(ell, static_cast<Real>(pl.x)).value);
  return pl;
}

inline constexpr const char* kMomentCsvHeader =
    "r,k,ell,p,m,ex,ey,ex2,ey2_upper,ex_asym,ey_asym,ratio_exact,x_concentration,"
    "y_concentration_bound";

namespace detail {
// shortest text that reads back to the same value
inline std::string fmt_real(Real v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const double d = static_cast<double>(v);
  const auto res = std::isfinite(d) ? std::to_chars(buf, buf + sizeof buf, d) : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
inline std::string fmt_log(const Magnitude& m) { return fmt_real(m.value()); }
inline std::string fmt_big(const BigRational& q) {
  if (q == 0) return "0";
  // exp(log) keeps values beyond double range printable as long double
  return fmt_real(to_real(q));
}
}  // namespace detail

inline std::string to_csv_row(const MomentReport& rep) {
  using detail::fmt_big;
  using detail::fmt_real;
  const auto& pl = rep.plan;
  std::string row;
  for (const std::string& cell :
       {fmt_real(pl.r), std::to_string(pl.k), std::to_string(pl.ell), fmt_real(pl.p),
        std::to_string(pl.m), fmt_big(rep.ex), fmt_big(rep.ey), fmt_big(rep.ex2),
        fmt_big(rep.ey2_upper), detail::fmt_log(rep.ex_asym), detail::fmt_log(rep.ey_asym),
        fmt_big(rep.ratio_exact), fmt_real(rep.x_concentration),
        fmt_real(rep.y_concentration_bound)}) {
    if (!row.empty()) row += ',';
    row += cell;
  }
  return row;
}

inline nlohmann::json to_json(const MomentReport& rep) {
  auto nan_to_null = [](Real v) -> nlohmann::json {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(static_cast<double>(v));
  };
  auto exact = [](const BigRational& q) {
    return nlohmann::json{{"exact", q.str()}, {"value", static_cast<double>(to_real(q))},
                          {"log", q > 0 ? nlohmann::json(static_cast<double>(log_of(q)))
                                        : nlohmann::json(nullptr)}};
  };
  return {{"schema", 1},
          {"plan", to_json(rep.plan)},
          {"ex", exact(rep.ex)},
          {"ey", exact(rep.ey)},
          {"ex2", exact(rep.ex2)},
          {"ey2_upper", exact(rep.ey2_upper)},
          {"ex_asym", {{"log", static_cast<double>(rep.ex_asym.log_value)}}},
          {"ey_asym", {{"log", static_cast<double>(rep.ey_asym.log_value)}}},
          {"ratio_exact", exact(rep.ratio_exact)},
          {"x_concentration", nan_to_null(rep.x_concentration)},
          {"y_concentration_bound", nan_to_null(rep.y_concentration_bound)}};
}

}  // namespace dpratio
