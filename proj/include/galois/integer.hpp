#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "galois/error.hpp"

namespace galois {

using Integer = mpz_class;
using Rational = mpq_class;

/// 64-bit integer that throws on overflow; used as the fast path of exact
/// integer elimination before falling back to GMP.
class CheckedInt {
 public:
  CheckedInt() = default;
  CheckedInt(std::int64_t v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  std::int64_t value() const noexcept { return v_; }

  friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw Error(ErrorCode::Overflow, "add");
    return r;
  }
  friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw Error(ErrorCode::Overflow, "sub");
    return r;
  }
  friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw Error(ErrorCode::Overflow, "mul");
    return r;
  }
  CheckedInt operator-() const {
    if (v_ == std::numeric_limits<std::int64_t>::min()) throw Error(ErrorCode::Overflow, "neg");
    return -v_;
  }
  friend bool operator==(CheckedInt a, CheckedInt b) { return a.v_ == b.v_; }
  friend bool operator!=(CheckedInt a, CheckedInt b) { return a.v_ != b.v_; }
  friend bool operator<(CheckedInt a, CheckedInt b) { return a.v_ < b.v_; }
  friend std::ostream& operator<<(std::ostream& os, CheckedInt a) { return os << a.v_; }

 private:
  std::int64_t v_ = 0;
};

namespace detail {

inline CheckedInt abs_value(CheckedInt a) { return a < 0 ? -a : a; }
inline Integer abs_value(const Integer& a) { return abs(a); }

/// Floor division (quotient rounded toward negative infinity).
inline CheckedInt floor_div(CheckedInt a, CheckedInt b) {
  std::int64_t q = a.value() / b.value();
  if ((a.value() % b.value() != 0) && ((a.value() < 0) != (b.value() < 0))) --q;
  return q;
}
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer to_integer(CheckedInt a) { return Integer(static_cast<long>(a.value())); }
inline Integer to_integer(const Integer& a) { return a; }

inline bool fits_int64(const Integer& a) {
  return a.fits_slong_p();
}

}  // namespace detail

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// Nonnegative residue of a modulo m > 0.
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool is_probable_prime(const Integer& p) {
  return p > 1 && mpz_probab_prime_p(p.get_mpz_t(), 30) != 0;
}

/// Prime support of |n| (n != 0).
inline std::set<Integer> prime_support(Integer n) {
  std::set<Integer> out;
  n = abs(n);
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.insert(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.insert(n);
  return out;
}

/// Removes every factor of the given primes from n.
inline Integer strip_primes(Integer n, const std::set<Integer>& primes) {
  for (const auto& p : primes)
    while (n != 0 && n % p == 0) n /= p;
  return n;
}

inline std::string to_string(const Integer& a) { return a.get_str(); }

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Inverse of a modulo m, or 0 when gcd(a, m) != 1.
inline Integer mod_inverse(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return 0;
  return r;
}

}  // namespace galois
