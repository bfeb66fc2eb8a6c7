#include <cmath>

#include <gtest/gtest.h>

#include "dpratio/oracles.hpp"
#include "dpratio/params.hpp"
#include "dpratio/special.hpp"

using namespace dpratio;

// Reference values of sum_i (1/i!)^l, from a 30-digit series evaluation.
constexpr long double kF1AtOne = 2.71828182845904523536L;
constexpr long double kF2AtOne = 2.27958530233606726744L;
constexpr long double kF3AtOne = 2.12970254898330641813L;

TEST(FEval, ReferenceValues) {
  EXPECT_EQ(f_eval(3, 0, 1e-12L).value, 1.0L);
  EXPECT_NEAR(static_cast<double>(f_eval(1, 1, 1e-12L).value), static_cast<double>(kF1AtOne), 1e-12);
  EXPECT_NEAR(static_cast<double>(f_eval(2, 1, 1e-12L).value), static_cast<double>(kF2AtOne), 1e-12);
  EXPECT_NEAR(static_cast<double>(f_eval(3, 1, 1e-12L).value), static_cast<double>(kF3AtOne), 1e-12);
  // f_1(x) = e^x
  EXPECT_NEAR(static_cast<double>(f_eval(1, 3.5L, 1e-12L).value), std::exp(3.5), 1e-10);
}

TEST(FEval, TailBoundCoversTheTruncationError) {
  for (long double tol : {1e-3L, 1e-6L, 1e-10L}) {
    const auto v = f_eval(2, 1, tol);
    EXPECT_LE(v.tail_bound, tol);
    EXPECT_LE(std::fabs(v.value - kF2AtOne), v.tail_bound + 1e-18L);
  }
}

TEST(FEval, Preconditions) {
  EXPECT_THROW(f_eval(2, -0.1L), Error);
  EXPECT_THROW(f_eval(2, 1, 0), Error);
  EXPECT_THROW(f_eval(0, 1), Error);
}

TEST(FEval, StrictlyIncreasing) {
  for (int ell = 1; ell <= 5; ++ell) {
    long double prev = -1;
    for (int s = 0; s <= 100; ++s) {
      const long double v = f_eval(ell, s * 0.07L).value;
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(FAtOneBounds, ValuesAndContainment) {
  EXPECT_EQ(f_at_one_bounds(1).lower, 2.0L);
  EXPECT_EQ(f_at_one_bounds(1).upper, 3.0L);
  EXPECT_EQ(f_at_one_bounds(5).upper, 2.0L + 1.0L / 31);
  EXPECT_TRUE(f_at_one_bounds(1).contains(kF1AtOne));
  for (int ell = 1; ell <= 12; ++ell) {
    const auto v = f_eval(ell, 1);
    EXPECT_TRUE(f_at_one_bounds(ell).contains(v.value, v.tail_bound)) << ell;
  }
}

TEST(HExact, Examples) {
  for (long a = 0; a <= 10; ++a) EXPECT_EQ(h_exact(a, 0), factorial(a));
  EXPECT_EQ(h_exact(2, 1), 1);
  EXPECT_EQ(h_exact(4, 4), 9);
  EXPECT_THROW(h_exact(3, 4), Error);
  EXPECT_THROW(h_exact(-1, 0), Error);
}

TEST(HExact, MatchesForbiddenMatchingEnumeration) {
  for (int a = 0; a <= 7; ++a)
    for (int b = 0; b <= a; ++b) EXPECT_EQ(h_exact(a, b), oracle::matchings_avoiding(a, b)) << a << "," << b;
}

TEST(HExact, BetweenZeroAndFactorial) {
  for (long a = 0; a <= 60; ++a)
    for (long b = 0; b <= a; ++b) {
      const BigInt h = h_exact(a, b);
      EXPECT_GE(h, 0);
      EXPECT_LE(h, factorial(a));
    }
}

TEST(HAsymptotic, WindowAndValue) {
  EXPECT_NEAR(static_cast<double>(h_asymptotic(10, 10)), 3628800.0 / std::exp(1.0), 1e-6);
  EXPECT_THROW(h_asymptotic(100, 50), Error);
  EXPECT_THROW(h_asymptotic(0, 0), Error);
  EXPECT_FALSE(in_h_window(10, 8));
  EXPECT_TRUE(in_h_window(10, 9));
}

TEST(HAsymptotic, RelativeErrorShrinksWithA) {
  const auto err = [](long a, long b) { return abs(h_relative_error(a, b)).convert_to<double>(); };
  EXPECT_LT(err(20, 20), err(10, 10));
  // worst case over the window
  double prev = INFINITY;
  for (long a : {10L, 20L, 40L}) {
    double worst = 0;
    for (long b = 0; b <= a; ++b)
      if (in_h_window(a, b)) worst = std::max(worst, err(a, b));
    EXPECT_LT(worst, prev);
    prev = worst;
  }
}

TEST(FallingRatio, Examples) {
  EXPECT_EQ(falling_ratio_exact(4, 2, 1), BigRational(1, 2));
  EXPECT_EQ(falling_ratio_exact(7, 3, 0), 1);
  EXPECT_EQ(falling_ratio_exact(8, 6, 4), BigRational(6, 28));
  EXPECT_THROW(falling_ratio_exact(4, 5, 1), Error);
  EXPECT_THROW(falling_ratio_exact(4, 2, 3), Error);
}

TEST(FallingRatio, BinomialIdentity) {
  for (long a = 0; a <= 40; ++a)
    for (long b = 0; b <= a; ++b)
      for (long x = 0; x <= b; ++x) ASSERT_EQ(falling_ratio_exact(a, b, x), oracle::binomial_ratio(a, b, x));
}

TEST(FallingRatio, Asymptotic) {
  EXPECT_EQ(falling_ratio_asymptotic(10, 4, 0), 1.0L);
  EXPECT_NEAR(static_cast<double>(falling_ratio_asymptotic(12, 12, 7)), 1.0, 1e-15);
  double prev = INFINITY;
  for (int k : {4, 8, 16}) {
    const auto pl = plan(0.3, k);
    const long a = pl.edge_total(), x = long{k} * pl.ell;
    const double err = static_cast<double>(
        std::fabs(falling_ratio_asymptotic(a, pl.m, x) / to_real(falling_ratio_exact(a, pl.m, x)) - 1));
    EXPECT_LT(err, prev) << k;
    prev = err;
  }
}

TEST(EdgeProb, Examples) {
  for (long x = 0; x <= 8; ++x) EXPECT_EQ(edge_prob_exact(2, 2, 8, x), 1);
  EXPECT_EQ(edge_prob_exact(2, 2, 6, 4), BigRational(3, 14));
  EXPECT_EQ(edge_prob_exact(2, 2, 3, 4), 0);
}

TEST(EdgeProb, KernelMatchesDirectRatios) {
  for (long m : {0L, 5L, 17L, 30L, 32L}) {
    const EdgeProbabilityKernel kernel(32, m, 16);
    for (long x = 0; x <= 16; ++x) EXPECT_EQ(kernel.probability(x), edge_prob_exact(4, 2, m, x));
  }
}
