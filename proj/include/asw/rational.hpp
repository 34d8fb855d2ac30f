#pragma once

#include <gmpxx.h>

#include <numeric>
#include <string>

namespace asw {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(const std::string& text) {
  Rational r(text, 10);
  r.canonicalize();
  return r;
}

// "num/den", or "num" for integers.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline BigInt floor_of(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline BigInt ceil_of(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

inline long pos_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline BigInt factorial(long n) {
  if (n < 0) throw Error(ErrorCode::kOutOfRange, "factorial of a negative integer");
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

// p-adic valuation of a nonzero integer.
inline long valuation(const BigInt& x, long p) {
  if (x == 0) return -1;
  BigInt y = abs(x);
  BigInt pp = p;
  return static_cast<long>(mpz_remove(y.get_mpz_t(), y.get_mpz_t(), pp.get_mpz_t()));
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace asw
