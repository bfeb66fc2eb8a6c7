#pragma once

// Arbitrary-precision integer/rational aliases and the small exact-combinatorics
// kernel shared by the counting and moment code.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace dpratio {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;

/// Thrown on every precondition violation in the library.
class Error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

inline BigInt factorial(long n) {
  require(n >= 0, "factorial: negative argument");
  BigInt r;
  mpz_fac_ui(r.backend().data(), static_cast<unsigned long>(n));
  return r;
}

/// Binomial coefficient; zero whenever k < 0, n < 0 or k > n.
inline BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.backend().data(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

/// Falling factorial (a)_x = a (a-1) ... (a-x+1).
inline BigInt falling(long a, long x) {
  require(x >= 0, "falling: negative length");
  BigInt r = 1;
  for (long t = 0; t < x; ++t) r *= (a - t);
  return r;
}

inline BigInt pow(const BigInt& base, unsigned e) {
  BigInt r;
  mpz_pow_ui(r.backend().data(), base.backend().data(), e);
  return r;
}

/// Natural log of a positive big integer, accurate to long double precision
/// regardless of magnitude.
inline long double log_of(const BigInt& v) {
  require(v > 0, "log_of: non-positive argument");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, v.backend().data());
  return std::log(static_cast<long double>(mant)) +
         static_cast<long double>(exp2) * std::log(2.0L);
}

/// Natural log of a positive rational.
inline long double log_of(const BigRational& q) {
  require(q > 0, "log_of: non-positive argument");
  return log_of(BigInt(boost::multiprecision::numerator(q))) -
         log_of(BigInt(boost::multiprecision::denominator(q)));
}

/// Converts a rational to long double without overflowing on huge numerators
/// and denominators (goes through logs when the direct conversion would).
inline long double to_real(const BigRational& q) {
  if (q == 0) return 0.0L;
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (msb(abs(num)) < 1000 && msb(den) < 1000) {
    return num.convert_to<long double>() / den.convert_to<long double>();
  }
  const long double mag = std::exp(log_of(BigRational(abs(q))));
  return q < 0 ? -mag : mag;
}

inline std::string to_string(const BigRational& q) { return q.str(); }
inline std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace dpratio
