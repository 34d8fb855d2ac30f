#pragma once

// Exact multivariate polynomials in the coefficients a_v (v in the rectangle),
// the pi-expansion B_v of the Dwork splitting function, the Q and U factors, the
// genericity polynomials G_{k_n,R}^l, and the genericity test for a given f.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asw/assignment.hpp"
#include "asw/error.hpp"
#include "asw/gnp.hpp"
#include "asw/padic.hpp"
#include "asw/polytope.hpp"
#include "asw/rational.hpp"

namespace asw {

// ---------------------------------------------------------------------------
// MPoly
// ---------------------------------------------------------------------------

// Sparse polynomial over Q in the variables a_v, v in [0,d1]x[0,d2]. The corner
// variables a_{0,0}, a_{d1,0}, a_{0,d2}, a_{d1,d2} are identically 1.
class MPoly {
 public:
  using Monomial = std::vector<int>;  // exponent per variable index

  explicit MPoly(const RectDelta& delta) : delta_(delta) {}

  static MPoly constant(const RectDelta& delta, const Rational& c) {
    MPoly r(delta);
    if (c != 0) r.terms_[Monomial(r.num_vars(), 0)] = c;
    return r;
  }

  // a_v (equal to the constant 1 at a corner).
  static MPoly variable(const RectDelta& delta, const LatticePoint& v) {
    MPoly r(delta);
    Monomial m(r.num_vars(), 0);
    if (!delta.is_vertex(v) && !v.is_origin()) m[r.index(v)] = 1;
    r.terms_[m] = 1;
    return r;
  }

  const RectDelta& delta() const { return delta_; }
  size_t num_vars() const { return static_cast<size_t>((delta_.d1() + 1) * (delta_.d2() + 1)); }
  size_t index(const LatticePoint& v) const { return static_cast<size_t>(v.v1 * (delta_.d2() + 1) + v.v2); }
  LatticePoint point(size_t idx) const {
    return {static_cast<long>(idx) / (delta_.d2() + 1), static_cast<long>(idx) % (delta_.d2() + 1)};
  }

  Monomial monomial_of(const std::vector<LatticePoint>& vars) const {
    Monomial m(num_vars(), 0);
    for (const auto& v : vars)
      if (!delta_.is_vertex(v) && !v.is_origin()) ++m[index(v)];
    return m;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  Rational coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    Rational& x = terms_[m];
    x += c;
    if (x == 0) terms_.erase(m);
  }

  MPoly operator+(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }
  MPoly operator-(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
  }
  MPoly operator*(const MPoly& o) const {
    MPoly r(delta_);
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms_) {
        Monomial m = m1;
        for (size_t i = 0; i < m.size(); ++i) m[i] += m2[i];
        r.add_term(m, c1 * c2);
      }
    return r;
  }
  MPoly scaled(const Rational& s) const {
    MPoly r(delta_);
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }
  bool operator==(const MPoly& o) const { return terms_ == o.terms_; }

  static int degree(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
  }

  std::vector<Monomial> support() const {
    std::vector<Monomial> out;
    for (const auto& [m, c] : terms_) out.push_back(m);
    return out;
  }

  // Evaluate in Q at values for the non-corner variables.
  Rational evaluate(const std::map<LatticePoint, Rational>& values) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (size_t i = 0; i < m.size(); ++i)
        for (int e = 0; e < m[i]; ++e) {
          auto it = values.find(point(i));
          t *= it == values.end() ? Rational(0) : it->second;
        }
      total += t;
    }
    return total;
  }

  // Evaluate mod p; coefficient denominators must be prime to p.
  long evaluate_mod(long p, const std::map<LatticePoint, long>& values) const {
    BigInt total = 0, pp = p;
    for (const auto& [m, c] : terms_) {
      BigInt den = c.get_den();
      if (den % p == 0) throw Error(ErrorCode::kBadReduction, "coefficient denominator divisible by p");
      BigInt inv;
      BigInt den_mod = den % pp;
      mpz_invert(inv.get_mpz_t(), den_mod.get_mpz_t(), pp.get_mpz_t());
      BigInt t = c.get_num() * inv;
      for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        auto it = values.find(point(i));
        long x = it == values.end() ? 0 : it->second;
        BigInt xp;
        mpz_powm_ui(xp.get_mpz_t(), BigInt(x).get_mpz_t(), static_cast<unsigned long>(m[i]), pp.get_mpz_t());
        t *= xp;
      }
      total += t;
    }
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), total.get_mpz_t(), pp.get_mpz_t());
    return r.get_si();
  }

  // Monomial rendered as {"v1,v2": exponent}.
  std::map<std::string, int> describe(const Monomial& m) const {
    std::map<std::string, int> out;
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) out[to_string(point(i))] = m[i];
    return out;
  }

 private:
  RectDelta delta_;
  std::map<Monomial, Rational> terms_;
};

// sum_k pi^k * coefficient_k
class PiPoly {
 public:
  explicit PiPoly(const RectDelta& delta) : delta_(delta) {}

  void add(int power, const MPoly& c) {
    auto it = terms_.find(power);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(power, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<int, MPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<int> order() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
  }
  const MPoly& leading() const {
    if (terms_.empty()) throw Error(ErrorCode::kEmptyInput, "zero pi-polynomial");
    return terms_.begin()->second;
  }

 private:
  RectDelta delta_;
  std::map<int, MPoly> terms_;
};

// ---------------------------------------------------------------------------
// B_v and its pi-order
// ---------------------------------------------------------------------------

// B_v = sum over (j_w) with sum j_w w = v of prod_w u_{j_w} a_w^{j_w} pi^{sum j_w},
// truncated at pi^{max_pi_power}. The origin contributes E(pi a_0) = E(pi).
inline PiPoly b_poly(const RectDelta& delta, long p, const LatticePoint& v, int max_pi_power) {
  if (v.v1 < 0 || v.v2 < 0) throw Error(ErrorCode::kOutOfRange, "B_v needs v in the first quadrant");
  auto u = artin_hasse_coeffs(p, max_pi_power);
  std::vector<LatticePoint> pts;
  for (const auto& w : delta.lattice_points())
    if (!w.is_origin()) pts.push_back(w);
  PiPoly out(delta);
  std::vector<int> mult(pts.size(), 0);
  std::function<void(size_t, LatticePoint, int)> rec = [&](size_t idx, LatticePoint rest, int used) {
    if (rest.is_origin()) {
      Rational c = 1;
      std::vector<LatticePoint> vars;
      for (size_t t = 0; t < pts.size(); ++t) {
        if (mult[t] == 0) continue;
        c *= u[static_cast<size_t>(mult[t])];
        for (int e = 0; e < mult[t]; ++e) vars.push_back(pts[t]);
      }
      MPoly base(delta);
      base.add_term(base.monomial_of(vars), Rational(1));
      // Origin factor: u_j pi^j for j_0 = 0 .. budget.
      for (int j0 = 0; used + j0 <= max_pi_power; ++j0)
        out.add(used + j0, base.scaled(c * u[static_cast<size_t>(j0)]));
      return;
    }
    if (idx == pts.size()) return;
    const auto& w = pts[idx];
    for (int j = 0; used + j <= max_pi_power; ++j) {
      LatticePoint r{rest.v1 - j * w.v1, rest.v2 - j * w.v2};
      if (r.v1 < 0 || r.v2 < 0) break;
      mult[idx] = j;
      rec(idx + 1, r, used + j);
    }
    mult[idx] = 0;
  };
  rec(0, v, 0);
  return out;
}

// Minimal number of nonzero points of the rectangle summing to v (dynamic program).
inline long ord_b_enumerated(const RectDelta& delta, const LatticePoint& v) {
  if (v.v1 < 0 || v.v2 < 0) throw Error(ErrorCode::kOutOfRange, "v outside the quadrant");
  const long n1 = v.v1, n2 = v.v2;
  const long inf = std::numeric_limits<long>::max() / 2;
  std::vector<std::vector<long>> best(static_cast<size_t>(n1 + 1), std::vector<long>(static_cast<size_t>(n2 + 1), inf));
  best[0][0] = 0;
  for (long a = 0; a <= n1; ++a)
    for (long b = 0; b <= n2; ++b) {
      if (a == 0 && b == 0) continue;
      long m = inf;
      for (long x = 0; x <= std::min(a, delta.d1()); ++x)
        for (long y = 0; y <= std::min(b, delta.d2()); ++y) {
          if (x == 0 && y == 0) continue;
          m = std::min(m, best[static_cast<size_t>(a - x)][static_cast<size_t>(b - y)] + 1);
        }
      best[static_cast<size_t>(a)][static_cast<size_t>(b)] = m;
    }
  return best[static_cast<size_t>(n1)][static_cast<size_t>(n2)];
}

// The closed form floor(v_c/d_c) + 1 in the dominant coordinate c (0 at the origin).
// Agrees with the enumeration exactly when v_c is not divisible by d_c.
inline long ord_b_closed_form(const RectDelta& delta, const LatticePoint& v) {
  if (v.is_origin()) return 0;
  int c = dominant_coordinate(delta, v);
  return floor_div(c == 0 ? v.v1 : v.v2, delta.side(c)) + 1;
}

// ceil(w(v)), the exact order for every v.
inline long ord_b_ceiling(const RectDelta& delta, const LatticePoint& v) {
  return ceil_div(weight_key(delta, v), delta.D());
}

// ---------------------------------------------------------------------------
// Q and U factors
// ---------------------------------------------------------------------------

// Factor of one row i -> j: 1/(t1! t2!) with, for v = m i - j in S2,
// t1 = floor((m1 i1 - j1)/d1), t2 = floor((m2 i2 - j2)/d2) - t1 (indices swapped for S1).
inline Rational q_factor_entry(const RectDelta& delta, const Multiplier& m, const LatticePoint& i,
                               const LatticePoint& j) {
  if (quadrant_forbidden(i, j)) throw Error(ErrorCode::kInfeasiblePermutation, "forbidden pair in permutation");
  long f1 = floor_div(m.c1 * i.v1 - j.v1, delta.d1());
  long f2 = floor_div(m.c2 * i.v2 - j.v2, delta.d2());
  // The block is decided by v = m i - j itself; it agrees with the class of i
  // except on the diagonal v1/d1 = v2/d2, where j tips the balance.
  LatticePoint v{m.c1 * i.v1 - j.v1, m.c2 * i.v2 - j.v2};
  long a, b;
  if (simplex_class(delta, v) == Simplex::kS2) {
    a = f1;
    b = f2 - f1;
  } else {
    a = f2;
    b = f1 - f2;
  }
  if (a < 0 || b < 0) throw Error(ErrorCode::kInfeasiblePermutation, "negative factorial argument in Q");
  return Rational(1) / Rational(factorial(a) * factorial(b));
}

// Q_{S1,sigma} Q_{S2,sigma} for sigma given as perm over the ordered set S.
inline Rational q_factor(const RectDelta& delta, const Multiplier& m, const std::vector<LatticePoint>& S,
                         const std::vector<int>& perm) {
  Rational q = 1;
  for (size_t a = 0; a < S.size(); ++a) q *= q_factor_entry(delta, m, S[a], S[static_cast<size_t>(perm[a])]);
  return q;
}

// U_{k_n,p}: prod over F_n of floor(m_c i_c/d_c)! floor(m_c' i_c'/d_c' ... ) as displayed:
// i in S2: floor(m1 i1/d1)! floor(m2 i2/d2 - m1 i1/d1)!, swapped for S1.
inline BigInt u_factor(const RectDelta& delta, const Multiplier& m, long n) {
  BigInt u = 1;
  const long D = delta.D();
  for (const auto& i : filtration(delta, n)) {
    long x1 = m.c1 * i.v1 * delta.d2();  // D * m1 i1 / d1
    long x2 = m.c2 * i.v2 * delta.d1();  // D * m2 i2 / d2
    // As in Q, the block follows m i, which differs from the class of i only on
    // the diagonal when m1 != m2.
    if (simplex_class(delta, {m.c1 * i.v1, m.c2 * i.v2}) == Simplex::kS2) {
      u *= factorial(floor_div(x1, D)) * factorial(floor_div(x2 - x1, D));
    } else {
      u *= factorial(floor_div(x2, D)) * factorial(floor_div(x1 - x2, D));
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// Genericity polynomials
// ---------------------------------------------------------------------------

// Default witness multiplier for a residue class: the least prime above 2 D^2 in
// the class when one exists; otherwise the least integer(s) above 2 D^2 with the
// prescribed residues (coordinatewise when the class has no integer representative).
inline Multiplier default_witness(const RectDelta& delta, const ResidueClass& R) {
  const long floor_value = 2 * delta.D() * delta.D();
  if (R.compatible(delta)) {
    long first = -1;
    for (long c = floor_value + 1; c < floor_value + 1 + 64 * delta.L(); ++c) {
      if (!R.contains(delta, c)) continue;
      if (first < 0) first = c;
      if (is_prime(c)) return Multiplier::of(c);
    }
    return Multiplier::of(first);
  }
  Multiplier m;
  for (long c = floor_value + 1;; ++c)
    if (pos_mod(c, delta.d1()) == R.r1) {
      m.c1 = c;
      break;
    }
  for (long c = floor_value + 1;; ++c)
    if (pos_mod(c, delta.d2()) == R.r2) {
      m.c2 = c;
      break;
    }
  return m;
}

struct GPolyResult {
  MPoly poly;
  long level = 0;
  long permutations = 0;   // number of sigma in Sym^l
  Rational M0;             // minimal assignment value on F_n
  Multiplier witness;
};

// G_{k_n,R}^l = sum over sigma with M(F_n, sigma) = M^0 + l/D of
// (-1)^{k_n} sgn(sigma) U Q prod_i a_{r_sigma(i)}.
inline GPolyResult g_poly(const RectDelta& delta, const ResidueClass& R, long n, long level,
                          const std::optional<Multiplier>& witness = std::nullopt,
                          long node_budget = 200'000'000L) {
  if (!in_i_set(delta, n)) throw Error(ErrorCode::kOutOfRange, "n not in I_D");
  Multiplier m = witness ? *witness : default_witness(delta, R);
  auto S = filtration(delta, n);
  auto C = cost_matrix(delta, R, S);
  auto best = min_assignment(C);
  long target = Rational(best.value * delta.D()).get_num().get_si() + level;
  BigInt U = u_factor(delta, m, n);
  const long kn = static_cast<long>(S.size());
  GPolyResult out{MPoly(delta), level, 0, best.value, m};
  out.permutations = enumerate_at_level(
      C.table, target,
      [&](const std::vector<int>& perm) {
        std::vector<LatticePoint> vars;
        for (size_t a = 0; a < S.size(); ++a) vars.push_back(residue_vector(delta, R, S[a], S[static_cast<size_t>(perm[a])]));
        Rational c = Rational(U) * q_factor(delta, m, S, perm);
        if ((kn % 2 == 1) != (permutation_sign(perm) < 0)) c = -c;
        out.poly.add_term(out.poly.monomial_of(vars), c);
      },
      node_budget);
  return out;
}

// Least l < D^2 with G^l nonzero.
inline GPolyResult least_level(const RectDelta& delta, const ResidueClass& R, long n,
                               const std::optional<Multiplier>& witness = std::nullopt) {
  const long D = delta.D();
  for (long l = 0; l < D * D; ++l) {
    auto g = g_poly(delta, R, n, l, witness);
    if (!g.poly.is_zero()) return g;
  }
  throw Error(ErrorCode::kNotFound, "no nonzero genericity polynomial below level D^2");
}

// Xi order on residues: weight first, then the first coordinate, then the second.
inline bool xi_less(const RectDelta& delta, const LatticePoint& a, const LatticePoint& b) {
  long wa = weight_key(delta, a), wb = weight_key(delta, b);
  if (wa != wb) return wa < wb;
  if (a.v1 != b.v1) return a.v1 < b.v1;
  return a.v2 < b.v2;
}

struct XiWitness {
  std::vector<int> perm;
  MPoly::Monomial monomial;
  long level = 0;            // (M(sigma) - M^0) * D
  bool used_off_diagonal = false;
};

// Greedy construction: repeatedly take the highest-Xi allowed entry in the two
// diagonal blocks (rows and columns in the same simplex), keeping a perfect
// allowed matching of the remaining rows possible; off-diagonal entries are used
// only when the blocks are exhausted.
inline XiWitness xi_witness(const RectDelta& delta, const ResidueClass& R, long n) {
  auto S = filtration(delta, n);
  auto C = cost_matrix(delta, R, S);
  const size_t k = S.size();
  std::vector<int> perm(k, -1);
  std::vector<char> row_used(k, 0), col_used(k, 0);
  XiWitness out;

  auto completable = [&]() {
    std::vector<size_t> rows, cols;
    for (size_t a = 0; a < k; ++a) {
      if (!row_used[a]) rows.push_back(a);
      if (!col_used[a]) cols.push_back(a);
    }
    if (rows.empty()) return true;
    CostTable sub;
    for (size_t r : rows) {
      std::vector<long> row;
      for (size_t c : cols) row.push_back(C.forbidden(r, c) ? CostTable::kForbidden : 0);
      sub.cost.push_back(row);
    }
    try {
      min_assignment_hungarian(sub);
      return true;
    } catch (const Error&) {
      return false;
    }
  };

  for (size_t step = 0; step < k; ++step) {
    bool placed = false;
    for (int pass = 0; pass < 2 && !placed; ++pass) {
      std::vector<std::pair<size_t, size_t>> cand;
      for (size_t a = 0; a < k; ++a) {
        if (row_used[a]) continue;
        for (size_t b = 0; b < k; ++b) {
          if (col_used[b] || C.forbidden(a, b)) continue;
          bool diagonal = simplex_class(delta, S[a]) == simplex_class(delta, S[b]);
          if (pass == 0 && !diagonal) continue;
          cand.emplace_back(a, b);
        }
      }
      // Highest Xi first; ties by row then column.
      std::stable_sort(cand.begin(), cand.end(), [&](const auto& x, const auto& y) {
        auto rx = residue_vector(delta, R, S[x.first], S[x.second]);
        auto ry = residue_vector(delta, R, S[y.first], S[y.second]);
        if (xi_less(delta, ry, rx)) return true;
        if (xi_less(delta, rx, ry)) return false;
        return x < y;
      });
      for (const auto& [a, b] : cand) {
        row_used[a] = col_used[b] = 1;
        if (completable()) {
          perm[a] = static_cast<int>(b);
          placed = true;
          if (pass == 1) out.used_off_diagonal = true;
          break;
        }
        row_used[a] = col_used[b] = 0;
      }
    }
    if (!placed) throw Error(ErrorCode::kNotFound, "Xi greedy construction got stuck");
  }
  out.perm = perm;
  std::vector<LatticePoint> vars;
  long total = 0;
  for (size_t a = 0; a < k; ++a) {
    vars.push_back(residue_vector(delta, R, S[a], S[static_cast<size_t>(perm[a])]));
    total += C.table.cost[a][static_cast<size_t>(perm[a])];
  }
  MPoly scratch(delta);
  out.monomial = scratch.monomial_of(vars);
  long best = Rational(min_assignment(C).value * delta.D()).get_num().get_si();
  out.level = total - best;
  return out;
}

struct WitnessCheck {
  XiWitness witness;
  long producers = 0;  // permutations at the witness level giving the witness monomial
  Rational coefficient;  // coefficient of the witness monomial in G at that level
};

// Confirms the witness monomial survives in G at its level: it must come from a
// single permutation, so no cancellation can remove it.
inline WitnessCheck check_xi_witness(const RectDelta& delta, const ResidueClass& R, long n,
                                     const std::optional<Multiplier>& mult = std::nullopt) {
  WitnessCheck out;
  out.witness = xi_witness(delta, R, n);
  auto S = filtration(delta, n);
  auto C = cost_matrix(delta, R, S);
  long target = Rational(min_assignment(C).value * delta.D()).get_num().get_si() + out.witness.level;
  MPoly scratch(delta);
  enumerate_at_level(C.table, target, [&](const std::vector<int>& perm) {
    std::vector<LatticePoint> vars;
    for (size_t a = 0; a < S.size(); ++a) vars.push_back(residue_vector(delta, R, S[a], S[static_cast<size_t>(perm[a])]));
    if (scratch.monomial_of(vars) == out.witness.monomial) ++out.producers;
  });
  out.coefficient = g_poly(delta, R, n, out.witness.level, mult).poly.coeff(out.witness.monomial);
  return out;
}

// ---------------------------------------------------------------------------
// Genericity test
// ---------------------------------------------------------------------------

enum class Membership { kInU, kInU0Only, kOutside };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::kInU: return "IN_U";
    case Membership::kInU0Only: return "IN_U0_ONLY";
    case Membership::kOutside: return "OUTSIDE";
  }
  return "?";
}

using CoeffMap = std::map<LatticePoint, long>;

struct GenericityVerdict {
  Membership membership = Membership::kOutside;
  ResidueClass R;
  bool trivial_class = false;
  std::map<long, long> levels;       // n -> l
  std::map<long, long> g_values;     // n -> G_n(f) mod p
  long g_product = 0;                // prod_n G_n(f) mod p
  bool all_coefficients_nonzero = false;
  CoeffMap normalized;               // coefficients after scaling the corners to 1
};

// Scale x1, x2 and f so the three nonzero corners become 1:
// mu = c/(ab), l1^{d1} = b/c, l2^{d2} = a/c with a = a_{d1,0}, b = a_{0,d2}, c = a_{d1,d2}.
inline CoeffMap normalize_corners(const RectDelta& delta, long p, const CoeffMap& f) {
  auto get = [&](LatticePoint v) {
    auto it = f.find(v);
    return it == f.end() ? 0L : pos_mod(it->second, p);
  };
  long a = get({delta.d1(), 0}), b = get({0, delta.d2()}), c = get({delta.d1(), delta.d2()});
  if (a == 0 || b == 0 || c == 0) throw Error(ErrorCode::kBadReduction, "a corner coefficient vanishes mod p");
  auto inv = [&](long x) {
    BigInt r;
    mpz_invert(r.get_mpz_t(), BigInt(x).get_mpz_t(), BigInt(p).get_mpz_t());
    return r.get_si();
  };
  auto mulp = [&](long x, long y) { return pos_mod(x * y, p); };
  auto powp = [&](long x, long e) {
    long r = 1;
    for (long i = 0; i < e; ++i) r = mulp(r, x);
    return r;
  };
  long mu = mulp(c, inv(mulp(a, b)));
  auto root = [&](long target, long d) -> long {
    for (long x = 1; x < p; ++x)
      if (powp(x, d) == target) return x;
    throw Error(ErrorCode::kBadReduction, "corner normalization needs a root outside F_p");
  };
  long l1 = root(mulp(b, inv(c)), delta.d1());
  long l2 = root(mulp(a, inv(c)), delta.d2());
  CoeffMap out;
  for (const auto& [v, x] : f) {
    long y = mulp(mulp(mu, pos_mod(x, p)), mulp(powp(l1, v.v1), powp(l2, v.v2)));
    if (y != 0) out[v] = y;
  }
  return out;
}

// Precomputed genericity polynomials for one (Delta, p).
class GenericityModel {
 public:
  GenericityModel(const RectDelta& delta, long p) : delta_(delta), p_(p), R_(ResidueClass::of_prime(delta, p)) {
    if (!is_prime(p) || delta.D() % p == 0) throw Error(ErrorCode::kBadInput, "p must be a prime not dividing D");
    if (R_.is_trivial()) return;
    for (long n : i_set(delta)) {
      auto g = least_level(delta, R_, n, Multiplier::of(p));
      levels_[n] = g.level;
      polys_.emplace(n, g.poly);
    }
  }

  const ResidueClass& residue_class() const { return R_; }
  const std::map<long, long>& levels() const { return levels_; }
  const std::map<long, MPoly>& polys() const { return polys_; }

  GenericityVerdict test(const CoeffMap& f) const {
    for (const auto& [v, x] : f)
      if (!delta_.contains(v)) throw Error(ErrorCode::kBadInput, "exponent outside the rectangle: " + to_string(v));
    GenericityVerdict out;
    out.R = R_;
    out.normalized = normalize_corners(delta_, p_, f);
    out.all_coefficients_nonzero = true;
    for (const auto& v : delta_.lattice_points()) {
      auto it = f.find(v);
      if (it == f.end() || pos_mod(it->second, p_) == 0) out.all_coefficients_nonzero = false;
    }
    out.trivial_class = R_.is_trivial();
    out.levels = levels_;
    long prod = 1;
    if (!out.trivial_class) {
      for (const auto& [n, poly] : polys_) {
        long val = poly.evaluate_mod(p_, out.normalized);
        out.g_values[n] = val;
        prod = pos_mod(prod * val, p_);
      }
    }
    out.g_product = prod;
    if (prod == 0) out.membership = Membership::kOutside;
    else out.membership = out.all_coefficients_nonzero ? Membership::kInU : Membership::kInU0Only;
    return out;
  }

 private:
  RectDelta delta_;
  long p_;
  ResidueClass R_;
  std::map<long, long> levels_;
  std::map<long, MPoly> polys_;
};

inline GenericityVerdict genericity_test(const CoeffMap& f, const RectDelta& delta, long p) {
  return GenericityModel(delta, p).test(f);
}

}  // namespace asw
