#pragma once

// Exact numeric substrate: arbitrary-precision integers and rationals,
// plus the small number-theory helpers used throughout.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwreath {

using Int = boost::multiprecision::cpp_int;
// Always reduced to lowest terms with positive denominator; zero is 0/1.
using Rational = boost::multiprecision::cpp_rational;

// Caller misuse (mismatched conductors, bad descriptors, unknown labels).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Configured resource bound exceeded (enumeration budget, degree cap).
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation produced inconsistent data (bad prime, failed lift, ...).
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return rat_den(q) == 1; }

inline long long to_ll(const Int& v) { return v.convert_to<long long>(); }

inline std::string format_rational(const Rational& q) {
  if (rat_den(q) == 1) return rat_num(q).str();
  return rat_num(q).str() + "/" + rat_den(q).str();
}

inline Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den <= 0) throw UsageError("rational denominator must be positive: " + s);
    return Rational(num, den);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("cannot parse rational: " + s);
  }
}

inline long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

inline long long lcm_ll(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

inline long long euler_phi(long long e) {
  if (e <= 0) throw UsageError("euler_phi requires a positive argument");
  long long result = e;
  long long m = e;
  for (long long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

inline bool is_prime_ll(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<long long> divisors_of(long long n) {
  std::vector<long long> small, large;
  for (long long d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

inline Int int_pow(Int base, unsigned long long exp) {
  Int r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

}  // namespace rwreath
