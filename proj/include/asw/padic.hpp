#pragma once

// Exact p-adic substrate: Z/p^N, Galois rings GR(p^N, e), truncated power series
// in T with an explicit precision marker, cyclotomic integers with their
// pi-adic valuation, and the Artin-Hasse exponential and its inverse.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "asw/error.hpp"
#include "asw/rational.hpp"

namespace asw {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Z / p^N
// ---------------------------------------------------------------------------

class ZmodPN {
 public:
  using Elem = u64;

  ZmodPN(long p, int n) : p_(p), n_(n) {
    if (!is_prime(p)) throw Error(ErrorCode::kBadInput, "modulus base must be prime");
    if (n < 1) throw Error(ErrorCode::kBadInput, "precision must be >= 1");
    BigInt m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    if (m >= BigInt(1) << 62) throw Error(ErrorCode::kBadInput, "p^N exceeds 62 bits");
    mod_ = m.get_ui();
  }

  long p() const { return p_; }
  int precision() const { return n_; }
  u64 modulus() const { return mod_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1 % mod_; }
  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + mod_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : mod_ - a; }
  Elem mul(Elem a, Elem b) const { return static_cast<Elem>(static_cast<u128>(a) * b % mod_); }
  Elem reduce(u128 x) const { return static_cast<Elem>(x % mod_); }

  Elem pow(Elem a, BigInt e) const {
    Elem r = one();
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Elem from_int(long x) const { return static_cast<Elem>(pos_mod(x % static_cast<long>(mod_), static_cast<long>(mod_))); }

  Elem from_bigint(const BigInt& x) const {
    BigInt r;
    BigInt m(static_cast<unsigned long>(mod_));
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r.get_ui();
  }

  // Requires the denominator to be a p-adic unit.
  Elem from_rational(const Rational& x) const {
    BigInt den = x.get_den();
    if (den % p_ == 0) throw Error(ErrorCode::kBadInput, "denominator divisible by p: " + to_string(x));
    return mul(from_bigint(x.get_num()), inv(from_bigint(den)));
  }

  Elem inv(Elem a) const {
    if (a % static_cast<u64>(p_) == 0) throw Error(ErrorCode::kBadInput, "inverse of a non-unit mod p^N");
    BigInt r, x(static_cast<unsigned long>(a)), m(static_cast<unsigned long>(mod_));
    mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r.get_ui();
  }

  // p-adic valuation of the residue; N for zero.
  int valuation(Elem a) const {
    if (a == 0) return n_;
    int v = 0;
    while (a % static_cast<u64>(p_) == 0) {
      a /= static_cast<u64>(p_);
      ++v;
    }
    return v;
  }

  // Symmetric-free canonical representative in [0, p^N).
  BigInt to_bigint(Elem a) const { return BigInt(static_cast<unsigned long>(a)); }

  bool operator==(const ZmodPN& o) const { return p_ == o.p_ && n_ == o.n_; }

 private:
  long p_;
  int n_;
  u64 mod_;
};

// ---------------------------------------------------------------------------
// Polynomials over F_p (small helpers for choosing field moduli)
// ---------------------------------------------------------------------------

namespace detail {

using FpPoly = std::vector<long>;  // coefficient i at index i

inline void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& g, long p) {
  FpPoly r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  size_t e = g.size() - 1;  // g monic
  for (size_t k = r.size(); k-- > e;) {
    long c = r[k];
    if (c == 0) continue;
    for (size_t t = 0; t <= e; ++t) r[k - e + t] = pos_mod(r[k - e + t] - c * g[t], p);
  }
  r.resize(std::min(r.size(), e));
  trim(r);
  return r;
}

inline FpPoly fp_powmod_x(BigInt n, const FpPoly& g, long p) {
  FpPoly result{1}, base{0, 1};
  if (g.size() == 2) base = {pos_mod(-g[0], p)};
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) result = fp_mulmod(result, base, g, p);
    base = fp_mulmod(base, base, g, p);
    n >>= 1;
  }
  trim(result);
  return result;
}

inline std::vector<BigInt> prime_factors(BigInt n) {
  std::vector<BigInt> out;
  for (BigInt d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

// Smallest (in lexicographic coefficient order) monic polynomial of degree e over
// F_p for which x generates the multiplicative group of F_p[x]/(g).
// Coefficients are returned low degree first, leading 1 included.
inline std::vector<long> primitive_polynomial(long p, int e) {
  if (e < 1) throw Error(ErrorCode::kBadInput, "field degree must be >= 1");
  BigInt order;
  mpz_ui_pow_ui(order.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  order -= 1;
  auto factors = detail::prime_factors(order);
  BigInt count;
  mpz_ui_pow_ui(count.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  for (BigInt idx = 0; idx < count; ++idx) {
    detail::FpPoly g(static_cast<size_t>(e) + 1, 0);
    g[static_cast<size_t>(e)] = 1;
    BigInt t = idx;
    for (int i = 0; i < e; ++i) {
      g[static_cast<size_t>(i)] = BigInt(t % p).get_si();
      t /= p;
    }
    if (g[0] == 0) continue;
    if (detail::fp_powmod_x(order, g, p) != detail::FpPoly{1}) continue;
    bool primitive = true;
    for (const auto& q : factors)
      if (detail::fp_powmod_x(order / q, g, p) == detail::FpPoly{1}) {
        primitive = false;
        break;
      }
    if (primitive) return g;
  }
  throw Error(ErrorCode::kNotFound, "no primitive polynomial");
}

// ---------------------------------------------------------------------------
// Galois ring GR(p^N, e) = (Z/p^N)[x]/(g), g a monic lift of an irreducible mod p
// ---------------------------------------------------------------------------

class GaloisRing {
 public:
  using Elem = std::vector<u64>;  // e coefficients, low degree first

  // Uses the primitive polynomial of degree e as modulus.
  GaloisRing(long p, int n, int e) : GaloisRing(p, n, primitive_polynomial(p, e)) {}

  GaloisRing(long p, int n, const std::vector<long>& modulus) : base_(p, n) {
    if (modulus.size() < 2 || modulus.back() != 1)
      throw Error(ErrorCode::kBadInput, "Galois ring modulus must be monic of degree >= 1");
    e_ = static_cast<int>(modulus.size()) - 1;
    for (long c : modulus) g_.push_back(base_.from_int(c));
    init_frobenius();
  }

  const ZmodPN& base() const { return base_; }
  long p() const { return base_.p(); }
  int precision() const { return base_.precision(); }
  int degree() const { return e_; }
  const std::vector<u64>& modulus() const { return g_; }

  Elem zero() const { return Elem(static_cast<size_t>(e_), 0); }
  Elem one() const { return scalar(base_.one()); }
  Elem scalar(u64 c) const {
    Elem r = zero();
    r[0] = c;
    return r;
  }
  Elem from_int(long c) const { return scalar(base_.from_int(c)); }
  // The class of x.
  Elem generator() const {
    if (e_ == 1) return scalar(base_.neg(g_[0]));
    Elem r = zero();
    r[1] = base_.one();
    return r;
  }

  bool is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](u64 c) { return c == 0; });
  }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = base_.add(a[i], b[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = base_.neg(a[i]);
    return r;
  }
  Elem scale(const Elem& a, u64 c) const {
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = base_.mul(a[i], c);
    return r;
  }

  Elem mul(const Elem& a, const Elem& b) const {
    const size_t e = static_cast<size_t>(e_);
    std::vector<u64> r(2 * e - 1, 0);
    for (size_t i = 0; i < e; ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < e; ++j) r[i + j] = base_.add(r[i + j], base_.mul(a[i], b[j]));
    }
    for (size_t k = r.size(); k-- > e;) {
      u64 c = r[k];
      if (c == 0) continue;
      for (size_t t = 0; t < e; ++t) r[k - e + t] = base_.sub(r[k - e + t], base_.mul(c, g_[t]));
    }
    r.resize(e);
    return r;
  }

  Elem pow(Elem a, BigInt n) const {
    Elem r = one();
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) r = mul(r, a);
      a = mul(a, a);
      n >>= 1;
    }
    return r;
  }

  BigInt residue_field_size() const {
    BigInt q;
    mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p()), static_cast<unsigned long>(e_));
    return q;
  }

  bool is_unit(const Elem& a) const {
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] % static_cast<u64>(p());
    return !is_zero(r);
  }

  Elem inv(const Elem& a) const {
    if (!is_unit(a)) throw Error(ErrorCode::kBadInput, "inverse of a non-unit in Galois ring");
    // a^(q-2) inverts mod p; Newton b <- b(2 - ab) doubles the precision.
    Elem b = pow(a, residue_field_size() - 2);
    Elem two = from_int(2);
    for (int prec = 1; prec < precision(); prec *= 2) b = mul(b, sub(two, mul(a, b)));
    return b;
  }

  // Frobenius: the automorphism reducing to alpha -> alpha^p.
  Elem frobenius(const Elem& a) const {
    Elem r = zero();
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0) r = add(r, scale(frob_powers_[i], a[i]));
    return r;
  }

  // Teichmueller lift of the residue of alpha: alpha^(q^(N-1)).
  Elem teichmuller(const Elem& a) const {
    BigInt q = residue_field_size();
    BigInt exp;
    mpz_pow_ui(exp.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(precision() - 1));
    return pow(a, exp);
  }

  // Sum of the e Frobenius conjugates; lands in the prime subring Z/p^N.
  u64 trace(const Elem& a) const {
    Elem s = zero(), cur = a;
    for (int i = 0; i < e_; ++i) {
      s = add(s, cur);
      cur = frobenius(cur);
    }
    for (int i = 1; i < e_; ++i)
      if (s[static_cast<size_t>(i)] != 0) throw Error(ErrorCode::kBadInput, "trace left the prime subring");
    return s[0];
  }

 private:
  Elem eval_g(const Elem& y) const {
    Elem r = scalar(g_.back());
    for (size_t k = g_.size() - 1; k-- > 0;) r = add(mul(r, y), scalar(g_[k]));
    return r;
  }
  Elem eval_dg(const Elem& y) const {
    Elem r = zero();
    for (size_t k = g_.size() - 1; k >= 1; --k) {
      r = add(mul(r, y), scalar(base_.mul(g_[k], base_.from_int(static_cast<long>(k)))));
      if (k == 1) break;
    }
    return r;
  }

  void init_frobenius() {
    // phi(x) is the root of g congruent to x^p mod p; found by Newton iteration.
    Elem y = pow(generator(), BigInt(p()));
    for (int prec = 1; prec < precision(); prec *= 2) y = sub(y, mul(eval_g(y), inv(eval_dg(y))));
    frob_powers_.assign(static_cast<size_t>(e_), one());
    for (int i = 1; i < e_; ++i) frob_powers_[static_cast<size_t>(i)] = mul(frob_powers_[static_cast<size_t>(i) - 1], y);
  }

  ZmodPN base_;
  int e_ = 1;
  std::vector<u64> g_;
  std::vector<Elem> frob_powers_;
};

// ---------------------------------------------------------------------------
// Truncated power series in T
// ---------------------------------------------------------------------------

// T-order of a truncated series: exact, or only known to be >= value.
struct SeriesOrder {
  long value = 0;
  bool exact = true;
  bool operator==(const SeriesOrder&) const = default;
};

template <class Ring>
struct TSeries {
  using Elem = typename Ring::Elem;
  std::vector<Elem> coeffs;  // c_0 .. c_{N_T - 1}

  int precision() const { return static_cast<int>(coeffs.size()); }
};

// Arithmetic on series modulo T^{N_T}; itself a ring (Elem = TSeries).
template <class Ring>
class SeriesRing {
 public:
  using Elem = TSeries<Ring>;
  using Coeff = typename Ring::Elem;

  SeriesRing(const Ring& ring, int nt) : ring_(ring), nt_(nt) {
    if (nt < 1) throw Error(ErrorCode::kBadInput, "T-precision must be >= 1");
  }

  const Ring& coeff_ring() const { return ring_; }
  int precision() const { return nt_; }

  Elem zero() const { return Elem{std::vector<Coeff>(static_cast<size_t>(nt_), ring_.zero())}; }
  Elem one() const { return constant(ring_.one()); }
  Elem constant(const Coeff& c) const {
    Elem r = zero();
    r.coeffs[0] = c;
    return r;
  }
  // 1 + T (or c T^k in general via monomial).
  Elem monomial(const Coeff& c, int k) const {
    Elem r = zero();
    if (k < nt_) r.coeffs[static_cast<size_t>(k)] = c;
    return r;
  }
  Elem from_int(long x) const { return constant(ring_.from_int(x)); }

  bool is_zero(const Elem& a) const {
    for (const auto& c : a.coeffs)
      if (!ring_.is_zero(c)) return false;
    return true;
  }
  bool equal(const Elem& a, const Elem& b) const {
    for (int i = 0; i < nt_; ++i)
      if (!ring_.equal(a.coeffs[static_cast<size_t>(i)], b.coeffs[static_cast<size_t>(i)])) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (int i = 0; i < nt_; ++i) r.coeffs[static_cast<size_t>(i)] = ring_.add(a.coeffs[static_cast<size_t>(i)], b.coeffs[static_cast<size_t>(i)]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (int i = 0; i < nt_; ++i) r.coeffs[static_cast<size_t>(i)] = ring_.sub(a.coeffs[static_cast<size_t>(i)], b.coeffs[static_cast<size_t>(i)]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& c : r.coeffs) c = ring_.neg(c);
    return r;
  }
  Elem scale(const Elem& a, const Coeff& s) const {
    Elem r = a;
    for (auto& c : r.coeffs) c = ring_.mul(c, s);
    return r;
  }

  // Index of the first nonzero coefficient (nt if none).
  int lowest(const Elem& a) const {
    for (int i = 0; i < nt_; ++i)
      if (!ring_.is_zero(a.coeffs[static_cast<size_t>(i)])) return i;
    return nt_;
  }

  Elem mul(const Elem& a, const Elem& b) const {
    Elem r = zero();
    mul_add(r, a, b);
    return r;
  }

  // acc += a * b, skipping the known-zero low parts of a and b.
  void mul_add(Elem& acc, const Elem& a, const Elem& b) const {
    int la = lowest(a), lb = lowest(b);
    if (la + lb >= nt_) return;
    if constexpr (std::is_same_v<Ring, ZmodPN>) {
      for (int k = la + lb; k < nt_; ++k) {
        u128 s = acc.coeffs[static_cast<size_t>(k)];
        for (int i = la; i <= k - lb; ++i)
          s += static_cast<u128>(a.coeffs[static_cast<size_t>(i)]) * b.coeffs[static_cast<size_t>(k - i)];
        acc.coeffs[static_cast<size_t>(k)] = ring_.reduce(s);
      }
    } else {
      for (int i = la; i < nt_; ++i) {
        const auto& ai = a.coeffs[static_cast<size_t>(i)];
        if (ring_.is_zero(ai)) continue;
        for (int j = lb; i + j < nt_; ++j)
          acc.coeffs[static_cast<size_t>(i + j)] =
              ring_.add(acc.coeffs[static_cast<size_t>(i + j)], ring_.mul(ai, b.coeffs[static_cast<size_t>(j)]));
      }
    }
  }

  Elem pow(Elem a, BigInt n) const {
    Elem r = one();
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) r = mul(r, a);
      n >>= 1;
      if (n > 0) a = mul(a, a);
    }
    return r;
  }

  // Inverse of a series whose constant term is a unit of the coefficient ring.
  Elem inv(const Elem& a) const {
    Coeff c0inv = ring_inv(a.coeffs[0]);
    Elem r = zero();
    r.coeffs[0] = c0inv;
    for (int k = 1; k < nt_; ++k) {
      Coeff s = ring_.zero();
      for (int i = 1; i <= k; ++i)
        s = ring_.add(s, ring_.mul(a.coeffs[static_cast<size_t>(i)], r.coeffs[static_cast<size_t>(k - i)]));
      r.coeffs[static_cast<size_t>(k)] = ring_.neg(ring_.mul(s, c0inv));
    }
    return r;
  }

  // sum_k c_k s^k evaluated by Horner: c is a list of coefficient-ring elements.
  Elem compose(const std::vector<Coeff>& c, const Elem& s) const {
    Elem r = zero();
    for (size_t k = c.size(); k-- > 0;) {
      r = mul(r, s);
      r.coeffs[0] = ring_.add(r.coeffs[0], c[k]);
    }
    return r;
  }

  SeriesOrder order(const Elem& a) const {
    int l = lowest(a);
    return l < nt_ ? SeriesOrder{l, true} : SeriesOrder{nt_, false};
  }

  Elem truncate(const Elem& a, int nt) const {
    Elem r = a;
    for (int i = nt; i < nt_; ++i) r.coeffs[static_cast<size_t>(i)] = ring_.zero();
    return r;
  }

 private:
  Coeff ring_inv(const Coeff& c) const {
    if constexpr (std::is_same_v<Coeff, Rational>) {
      return Rational(1) / c;
    } else {
      return ring_.inv(c);
    }
  }

  Ring ring_;
  int nt_;
};

// The rationals as a coefficient ring (for exact series identities).
struct RationalRing {
  using Elem = Rational;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long x) const { return Rational(x); }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const { return Rational(1) / a; }
};

// ---------------------------------------------------------------------------
// Artin-Hasse exponential E(x) = exp(sum_i x^{p^i}/p^i) and pi(T) with E(pi) = 1+T
// ---------------------------------------------------------------------------

// u_0..u_n from n u_n = sum_{p^i <= n} u_{n - p^i}.
inline std::vector<Rational> artin_hasse_coeffs(long p, int n) {
  std::vector<Rational> u(static_cast<size_t>(n) + 1);
  u[0] = 1;
  for (long k = 1; k <= n; ++k) {
    Rational s = 0;
    for (long pk = 1; pk <= k; pk *= p) s += u[static_cast<size_t>(k - pk)];
    u[static_cast<size_t>(k)] = s / k;
  }
  return u;
}

// pi(T) by Newton iteration pi <- pi - (E(pi) - 1 - T)/E'(pi), over any coefficient
// ring into which the Artin-Hasse coefficients can be mapped.
template <class Ring, class Convert>
TSeries<Ring> invert_artin_hasse_in(const SeriesRing<Ring>& S, long p, Convert convert) {
  const int nt = S.precision();
  auto u_rat = artin_hasse_coeffs(p, nt);
  std::vector<typename Ring::Elem> u, du;
  for (int k = 0; k < nt; ++k) u.push_back(convert(u_rat[static_cast<size_t>(k)]));
  for (int k = 1; k <= nt; ++k) du.push_back(convert(u_rat[static_cast<size_t>(k)] * k));
  const auto& R = S.coeff_ring();
  auto target = S.add(S.one(), S.monomial(R.one(), 1));
  auto pi = S.monomial(R.one(), 1);
  for (int prec = 2; prec < 2 * nt; prec *= 2) {
    auto err = S.sub(S.compose(u, pi), target);
    auto deriv = S.compose(du, pi);
    pi = S.sub(pi, S.mul(err, S.inv(deriv)));
  }
  return pi;
}

inline TSeries<RationalRing> invert_artin_hasse(long p, int nt) {
  static const RationalRing Q;
  SeriesRing<RationalRing> S(Q, nt);
  return invert_artin_hasse_in(S, p, [](const Rational& x) { return x; });
}

inline TSeries<ZmodPN> invert_artin_hasse(const SeriesRing<ZmodPN>& S) {
  const ZmodPN& R = S.coeff_ring();
  return invert_artin_hasse_in(S, R.p(), [&R](const Rational& x) { return R.from_rational(x); });
}

// ---------------------------------------------------------------------------
// Cyclotomic integers Z[x]/Phi_{p^m}(x), optionally reduced mod p^N
// ---------------------------------------------------------------------------

inline long euler_phi_prime_power(long p, int m) { return (p - 1) * ipow(p, m - 1); }

// Phi_{p^m}(x) = sum_{i<p} x^{i p^{m-1}}, low degree first.
inline std::vector<BigInt> cyclotomic_poly(long p, int m) {
  long step = ipow(p, m - 1);
  std::vector<BigInt> c(static_cast<size_t>((p - 1) * step + 1), 0);
  for (long i = 0; i < p; ++i) c[static_cast<size_t>(i * step)] = 1;
  return c;
}

// Bareiss fraction-free determinant.
inline BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
  const size_t n = a.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

class CycInt {
 public:
  // modulus_power = 0 means an exact element of Z[zeta]; N > 0 means mod p^N.
  CycInt(long p, int m, int modulus_power = 0)
      : p_(p), m_(m), n_(modulus_power), c_(static_cast<size_t>(euler_phi_prime_power(p, m)), 0) {
    if (m < 1) throw Error(ErrorCode::kBadInput, "conductor exponent must be >= 1");
  }

  // sum_k coeffs[k] x^k, reduced modulo Phi_{p^m} (and p^N).
  static CycInt from_poly(long p, int m, const std::vector<BigInt>& coeffs, int modulus_power = 0) {
    CycInt r(p, m, modulus_power);
    const long deg = r.degree();
    // x^{p^m} = 1 first, then fold degrees >= deg with Phi.
    const long order = ipow(p, m);
    std::vector<BigInt> c(static_cast<size_t>(order), 0);
    for (size_t k = 0; k < coeffs.size(); ++k) c[k % static_cast<size_t>(order)] += coeffs[k];
    auto phi = cyclotomic_poly(p, m);
    for (long k = order - 1; k >= deg; --k) {
      BigInt t = c[static_cast<size_t>(k)];
      if (t == 0) continue;
      for (long j = 0; j <= deg; ++j) c[static_cast<size_t>(k - deg + j)] -= t * phi[static_cast<size_t>(j)];
    }
    for (long k = 0; k < deg; ++k) r.c_[static_cast<size_t>(k)] = c[static_cast<size_t>(k)];
    r.normalize();
    return r;
  }

  static CycInt zeta_power(long p, int m, long t, int modulus_power = 0) {
    std::vector<BigInt> c(static_cast<size_t>(pos_mod(t, ipow(p, m))) + 1, 0);
    c.back() = 1;
    return from_poly(p, m, c, modulus_power);
  }

  static CycInt integer(long p, int m, const BigInt& v, int modulus_power = 0) {
    CycInt r(p, m, modulus_power);
    r.c_[0] = v;
    r.normalize();
    return r;
  }

  long p() const { return p_; }
  int m() const { return m_; }
  int modulus_power() const { return n_; }
  long degree() const { return static_cast<long>(c_.size()); }
  const std::vector<BigInt>& coeffs() const { return c_; }

  CycInt operator+(const CycInt& o) const {
    CycInt r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    r.normalize();
    return r;
  }
  CycInt operator-(const CycInt& o) const {
    CycInt r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    r.normalize();
    return r;
  }
  CycInt operator*(const CycInt& o) const {
    std::vector<BigInt> prod(2 * c_.size(), 0);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (size_t j = 0; j < c_.size(); ++j) prod[i + j] += c_[i] * o.c_[j];
    }
    return from_poly(p_, m_, prod, n_);
  }
  bool operator==(const CycInt& o) const { return p_ == o.p_ && m_ == o.m_ && c_ == o.c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const BigInt& x) { return x == 0; });
  }

  // Reduce the coefficients modulo p^N (N > 0).
  CycInt reduced(int modulus_power) const {
    CycInt r = *this;
    r.n_ = modulus_power;
    r.normalize();
    return r;
  }

  // Image under zeta -> 1 (an integer).
  BigInt at_one() const {
    BigInt s = 0;
    for (const auto& c : c_) s += c;
    return s;
  }

 private:
  void normalize() {
    if (n_ <= 0) return;
    BigInt mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(n_));
    for (auto& c : c_) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  }

  long p_;
  int m_;
  int n_;
  std::vector<BigInt> c_;
};

// v_pi(c) with pi = zeta - 1, normalized so v_pi(pi) = 1, via v_p of the norm
// Res(Phi_{p^m}, c) (totally ramified, residue degree 1). For an element known only
// mod p^N the value is exact below the cap N (p-1) p^{m-1}; otherwise it is
// reported as a lower bound equal to the cap.
inline SeriesOrder pi_valuation(const CycInt& c) {
  const long e = c.degree();
  const long cap = c.modulus_power() > 0 ? c.modulus_power() * e : -1;
  if (c.is_zero()) return {cap < 0 ? -1 : cap, false};
  // Matrix of multiplication by c on the basis 1, x, ..., x^{e-1}.
  std::vector<std::vector<BigInt>> mat(static_cast<size_t>(e), std::vector<BigInt>(static_cast<size_t>(e), 0));
  CycInt basis = CycInt::integer(c.p(), c.m(), 1);
  CycInt exact_c = c.reduced(0);
  for (long j = 0; j < e; ++j) {
    CycInt col = exact_c * basis;
    for (long i = 0; i < e; ++i) mat[static_cast<size_t>(i)][static_cast<size_t>(j)] = col.coeffs()[static_cast<size_t>(i)];
    basis = basis * CycInt::zeta_power(c.p(), c.m(), 1);
  }
  BigInt det = bareiss_det(std::move(mat));
  if (det == 0) return {cap < 0 ? -1 : cap, false};
  long v = valuation(det, c.p());
  if (cap >= 0 && v >= cap) return {cap, false};
  return {v, true};
}

// sum_k s_k (zeta_{p^m} - 1)^k in Z[zeta]/(p^N). The discarded tail T^{>=N_T} has
// pi-valuation >= N_T, so N_T >= N (p-1) p^{m-1} is required.
inline CycInt specialize_T(const ZmodPN& R, const TSeries<ZmodPN>& s, int m) {
  const long p = R.p();
  const int n = R.precision();
  if (static_cast<long>(s.precision()) < n * euler_phi_prime_power(p, m))
    throw Error(ErrorCode::kPrecisionExhausted,
                "specialization needs N_T >= " + std::to_string(n * euler_phi_prime_power(p, m)));
  CycInt result(p, m, n);
  CycInt pi = CycInt::zeta_power(p, m, 1, n) - CycInt::integer(p, m, 1, n);
  // Horner in (x - 1).
  for (int k = s.precision(); k-- > 0;) {
    result = result * pi + CycInt::integer(p, m, R.to_bigint(s.coeffs[static_cast<size_t>(k)]), n);
  }
  return result;
}

}  // namespace asw
