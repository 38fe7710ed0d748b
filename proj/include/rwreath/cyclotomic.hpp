#pragma once

// Exact cyclotomic arithmetic. A Cyclotomic value is an element of
// Q(zeta_e) in the power basis 1, zeta, ..., zeta^(phi(e)-1), reduced
// modulo the e-th cyclotomic polynomial, so equality is coefficient
// equality and inner products can be tested for integrality exactly.

#include "rwreath/numeric.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace rwreath {

namespace detail {

// Integer polynomials, ascending coefficients, no trailing zeros.
using IPoly = std::vector<Int>;

inline void ipoly_trim(IPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline IPoly ipoly_mul(const IPoly& a, const IPoly& b) {
  if (a.empty() || b.empty()) return {};
  IPoly r(a.size() + b.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ipoly_trim(r);
  return r;
}

// Exact division; throws if the division leaves a remainder.
inline IPoly ipoly_divexact(IPoly num, const IPoly& den) {
  if (den.empty()) throw InternalError("polynomial division by zero");
  ipoly_trim(num);
  if (num.empty()) return {};
  if (num.size() < den.size()) throw InternalError("inexact polynomial division");
  IPoly q(num.size() - den.size() + 1, Int(0));
  for (std::size_t i = q.size(); i-- > 0;) {
    Int lead = num[i + den.size() - 1];
    if (lead == 0) continue;
    if (lead % den.back() != 0) throw InternalError("inexact polynomial division");
    Int f = lead / den.back();
    q[i] = f;
    for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= f * den[j];
  }
  ipoly_trim(num);
  if (!num.empty()) throw InternalError("inexact polynomial division");
  return q;
}

}  // namespace detail

// The e-th cyclotomic polynomial, by iterated exact division of x^e - 1
// by the cyclotomic polynomials of the proper divisors of e.
inline const std::vector<Int>& cyclotomic_polynomial(long long e) {
  if (e < 1) throw UsageError("cyclotomic_polynomial requires e >= 1");
  static std::map<long long, detail::IPoly> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(e);
  if (it != cache.end()) return it->second;
  // x^e - 1
  detail::IPoly num(static_cast<std::size_t>(e) + 1, Int(0));
  num[0] = -1;
  num.back() = 1;
  for (long long d : divisors_of(e)) {
    if (d == e) continue;
    auto fit = cache.find(d);
    if (fit == cache.end()) {
      // Fill recursively; divisors_of returns ascending so smaller ones exist
      // unless the cache is cold for them too.
      detail::IPoly dnum(static_cast<std::size_t>(d) + 1, Int(0));
      dnum[0] = -1;
      dnum.back() = 1;
      for (long long dd : divisors_of(d)) {
        if (dd == d) continue;
        dnum = detail::ipoly_divexact(std::move(dnum), cache.at(dd));
      }
      fit = cache.emplace(d, std::move(dnum)).first;
    }
    num = detail::ipoly_divexact(std::move(num), fit->second);
  }
  return cache.emplace(e, std::move(num)).first->second;
}

class Cyclotomic {
 public:
  explicit Cyclotomic(long long conductor = 1)
      : e_(checked(conductor)), c_(static_cast<std::size_t>(euler_phi(e_)), Rational(0)) {}

  static Cyclotomic from_rational(long long conductor, const Rational& q) {
    Cyclotomic z(conductor);
    z.c_[0] = q;
    return z;
  }

  static Cyclotomic zero(long long conductor) { return Cyclotomic(conductor); }
  static Cyclotomic one(long long conductor) { return from_rational(conductor, 1); }

  // zeta_e^k
  static Cyclotomic root_of_unity(long long conductor, long long k) {
    Cyclotomic z(conductor);
    k %= conductor;
    if (k < 0) k += conductor;
    std::vector<Rational> powers(static_cast<std::size_t>(conductor), Rational(0));
    powers[static_cast<std::size_t>(k)] = 1;
    z.c_ = reduce(conductor, std::move(powers));
    return z;
  }

  // sum_t powers[t] * zeta_e^t, reduced.
  static Cyclotomic from_power_coeffs(long long conductor, std::vector<Rational> powers) {
    Cyclotomic z(conductor);
    z.c_ = reduce(conductor, std::move(powers));
    return z;
  }

  long long conductor() const { return e_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
  }

  // Defined when all coefficients beyond the constant term vanish.
  std::optional<Rational> as_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return std::nullopt;
    return c_[0];
  }

  Cyclotomic operator-() const {
    Cyclotomic r(*this);
    for (auto& q : r.c_) q = -q;
    return r;
  }

  Cyclotomic& operator+=(const Cyclotomic& o) {
    require_same_conductor(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }

  Cyclotomic& operator-=(const Cyclotomic& o) {
    require_same_conductor(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }

  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    a.require_same_conductor(b);
    if (a.is_zero() || b.is_zero()) return Cyclotomic(a.e_);
    std::vector<Rational> prod(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j] == 0) continue;
        prod[i + j] += a.c_[i] * b.c_[j];
      }
    }
    Cyclotomic r(a.e_);
    r.c_ = reduce(a.e_, std::move(prod));
    return r;
  }

  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  Cyclotomic scaled(const Rational& q) const {
    Cyclotomic r(*this);
    for (auto& c : r.c_) c *= q;
    return r;
  }

  // Galois map zeta -> zeta^k, gcd(k, e) = 1.
  Cyclotomic galois(long long k) const {
    k %= e_;
    if (k < 0) k += e_;
    if (std::gcd(k, e_) != 1)
      throw UsageError("galois exponent must be coprime to the conductor");
    std::vector<Rational> powers(static_cast<std::size_t>(e_), Rational(0));
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      powers[static_cast<std::size_t>((static_cast<long long>(j) * k) % e_)] += c_[j];
    }
    Cyclotomic r(e_);
    r.c_ = reduce(e_, std::move(powers));
    return r;
  }

  // Complex conjugation: zeta -> zeta^(e-1).
  Cyclotomic conj() const { return e_ == 1 ? *this : galois(e_ - 1); }

  bool is_galois_invariant() const {
    for (long long k = 2; k < e_; ++k)
      if (std::gcd(k, e_) == 1 && !(galois(k) == *this)) return false;
    return true;
  }

  // Embed into Q(zeta_m) for e | m.
  Cyclotomic embedded(long long m) const {
    if (m == e_) return *this;
    if (m % e_ != 0) throw UsageError("embedding target conductor must be a multiple");
    long long f = m / e_;
    std::vector<Rational> powers(static_cast<std::size_t>(m), Rational(0));
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      powers[static_cast<std::size_t>(static_cast<long long>(j) * f)] += c_[j];
    }
    Cyclotomic r(m);
    r.c_ = reduce(m, std::move(powers));
    return r;
  }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.e_ == b.e_) return a.c_ == b.c_;
    long long m = lcm_ll(a.e_, b.e_);
    return a.embedded(m).c_ == b.embedded(m).c_;
  }
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  // Deterministic total order for values of equal conductor (row sorting).
  static bool lex_less(const Cyclotomic& a, const Cyclotomic& b) {
    a.require_same_conductor(b);
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

 private:
  long long e_;
  std::vector<Rational> c_;

  static long long checked(long long e) {
    if (e < 1) throw UsageError("conductor must be positive");
    return e;
  }

  void require_same_conductor(const Cyclotomic& o) const {
    if (e_ != o.e_)
      throw UsageError("cyclotomic conductor mismatch: " + std::to_string(e_) + " vs " +
                       std::to_string(o.e_));
  }

  // Reduce an arbitrary-degree coefficient vector modulo Phi_e.
  static std::vector<Rational> reduce(long long e, std::vector<Rational> p) {
    const auto& phi = cyclotomic_polynomial(e);
    const std::size_t deg = phi.size() - 1;  // = euler_phi(e)
    for (std::size_t i = p.size(); i-- > deg;) {
      if (p[i] == 0) continue;
      Rational f = p[i];  // Phi_e is monic
      for (std::size_t j = 0; j < phi.size(); ++j) {
        p[i - deg + j] -= f * Rational(phi[j]);
      }
    }
    p.resize(deg, Rational(0));
    return p;
  }
};

// Embeds both operands into the lcm conductor.
inline std::pair<Cyclotomic, Cyclotomic> align(const Cyclotomic& a, const Cyclotomic& b) {
  long long m = lcm_ll(a.conductor(), b.conductor());
  return {a.embedded(m), b.embedded(m)};
}

}  // namespace rwreath
