#pragma once

// The analytic side: the Dwork splitting function E_f(x) = prod_v E(pi(T) a_v x^v)
// over Z/p^Np [[T]] / T^{N_T}, the truncated Frobenius matrix on monomials of bounded
// weight, its characteristic series det(1 - A s), and the Newton polygons derived
// from it (T-adic, and pi-adic after specializing T at zeta_{p^m} - 1).
//
// Coefficients of f are read in F_p, so their Teichmueller lifts lie in Z_p and the
// matrix over F_q (q = p^a) is A^a with no Frobenius twist.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "asw/error.hpp"
#include "asw/padic.hpp"
#include "asw/polygon.hpp"
#include "asw/polytope.hpp"
#include "asw/rational.hpp"
#include "asw/symbolic.hpp"

namespace asw {

using Series = TSeries<ZmodPN>;

struct DworkParams {
  long p = 5;
  int a = 1;
  int np = 2;        // p-adic precision of coefficients
  int nt = 40;       // T-adic precision
  Rational wmax = 3; // basis: points of weight <= wmax
};

// Teichmueller lift of an integer residue in Z/p^N: x^{p^{N-1}}.
inline u64 teichmuller_int(const ZmodPN& R, long x) {
  BigInt e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(R.p()), static_cast<unsigned long>(R.precision() - 1));
  return R.pow(R.from_int(x), e);
}

// Coefficients of E_f(x) on the grid [0,g1] x [0,g2].
class SplittingFunction {
 public:
  SplittingFunction(const RectDelta& delta, const CoeffMap& f, const ZmodPN& ring, int nt, long g1, long g2)
      : delta_(delta), ring_(ring), S_(ring_, nt), g1_(g1), g2_(g2) {
    for (const auto& [v, x] : f)
      if (!delta.contains(v)) throw Error(ErrorCode::kBadInput, "exponent outside the rectangle: " + to_string(v));
    // Cells whose weight forces T-order >= nt stay zero.
    g1_ = std::min(g1_, nt * delta.d1());
    g2_ = std::min(g2_, nt * delta.d2());
    grid_.assign(static_cast<size_t>((g1_ + 1) * (g2_ + 1)), S_.zero());
    at(0, 0) = S_.one();

    pi_ = invert_artin_hasse(S_);
    auto u = artin_hasse_coeffs(ring.p(), nt);
    std::vector<Series> pi_pow{S_.one()};
    for (int j = 1; j < nt; ++j) pi_pow.push_back(S_.mul(pi_pow.back(), pi_));

    for (const auto& [v, x] : f) {
      if (pos_mod(x, ring.p()) == 0) continue;
      u64 tau = teichmuller_int(ring, x);
      // c_j = u_j tau^j pi^j.
      std::vector<Series> c;
      u64 tj = ring.one();
      for (int j = 0; j < nt; ++j) {
        c.push_back(S_.scale(pi_pow[static_cast<size_t>(j)], ring.mul(ring.from_rational(u[static_cast<size_t>(j)]), tj)));
        tj = ring.mul(tj, tau);
      }
      multiply_factor(v, c);
    }
  }

  const SeriesRing<ZmodPN>& series_ring() const { return S_; }
  const ZmodPN& ring() const { return ring_; }
  const Series& pi() const { return pi_; }

  // Coefficient of x^u (zero outside the grid or the quadrant).
  Series coefficient(const LatticePoint& u) const {
    if (u.v1 < 0 || u.v2 < 0 || u.v1 > g1_ || u.v2 > g2_) return S_.zero();
    return grid_[static_cast<size_t>(u.v1 * (g2_ + 1) + u.v2)];
  }

 private:
  Series& at(long a, long b) { return grid_[static_cast<size_t>(a * (g2_ + 1) + b)]; }

  // grid <- grid * sum_j c_j x^{j v}, in place (descending cells).
  void multiply_factor(const LatticePoint& v, const std::vector<Series>& c) {
    const int nt = S_.precision();
    if (v.is_origin()) {
      Series total = S_.zero();
      for (const auto& cj : c) total = S_.add(total, cj);
      for (auto& cell : grid_) cell = S_.mul(cell, total);
      return;
    }
    for (long a = g1_; a >= 0; --a)
      for (long b = g2_; b >= 0; --b) {
        Series acc = at(a, b);
        for (int j = 1; j < nt; ++j) {
          long a2 = a - j * v.v1, b2 = b - j * v.v2;
          if (a2 < 0 || b2 < 0) break;
          S_.mul_add(acc, at(a2, b2), c[static_cast<size_t>(j)]);
        }
        at(a, b) = acc;
      }
  }

  RectDelta delta_;
  ZmodPN ring_;
  SeriesRing<ZmodPN> S_;
  long g1_, g2_;
  std::vector<Series> grid_;
  Series pi_;
};

class DworkMatrix {
 public:
  DworkMatrix(const RectDelta& delta, const CoeffMap& f, const DworkParams& params)
      : delta_(delta), params_(params), ring_(params.p, params.np),
        basis_(points_up_to_weight(delta, params.wmax)) {
    if (params.a < 1) throw Error(ErrorCode::kBadInput, "a must be >= 1");
    long m1 = 0, m2 = 0;
    for (const auto& v : basis_) {
      m1 = std::max(m1, v.v1);
      m2 = std::max(m2, v.v2);
    }
    split_.emplace(delta, f, ring_, params.nt, params.p * m1, params.p * m2);
    // Smallest weight left out of the basis.
    long key = floor_of(params.wmax * delta.D()).get_si() + 1;
    while (w_count(delta, key) == 0) ++key;
    excluded_key_ = key;
  }

  const RectDelta& delta() const { return delta_; }
  const DworkParams& params() const { return params_; }
  const ZmodPN& ring() const { return ring_; }
  const SeriesRing<ZmodPN>& series_ring() const { return split_->series_ring(); }
  const std::vector<LatticePoint>& basis() const { return basis_; }
  const SplittingFunction& splitting() const { return *split_; }
  size_t size() const { return basis_.size(); }

  // A_{ij} = coefficient of x^{p i - j} in E_f.
  Series entry(const LatticePoint& i, const LatticePoint& j) const {
    return split_->coefficient({params_.p * i.v1 - j.v1, params_.p * i.v2 - j.v2});
  }

  // The full matrix A^a over the basis (rows i, columns j).
  std::vector<std::vector<Series>> materialize() const {
    const auto& S = series_ring();
    const size_t n = basis_.size();
    std::vector<std::vector<Series>> A(n, std::vector<Series>(n, S.zero()));
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < n; ++c) A[r][c] = entry(basis_[r], basis_[c]);
    auto P = A;
    for (int t = 1; t < params_.a; ++t) P = mat_mul(P, A);
    return P;
  }

  std::vector<std::vector<Series>> mat_mul(const std::vector<std::vector<Series>>& X,
                                           const std::vector<std::vector<Series>>& Y) const {
    const auto& S = series_ring();
    const size_t n = X.size();
    std::vector<std::vector<Series>> Z(n, std::vector<Series>(n, S.zero()));
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) S.mul_add(Z[i][j], X[i][k], Y[k][j]);
    return Z;
  }

  // D * (smallest weight outside the basis).
  long excluded_key() const { return excluded_key_; }

  // T-adic precision to which H_k of the truncated matrix equals H_k of the full
  // operator: every term touching a point outside the basis has T-order at least
  // (p-1)(w_excl + sum of the k-1 smallest basis weights).
  long certified_precision(long k) const {
    long key = excluded_key_;
    for (long t = 0; t + 1 < k && t < static_cast<long>(basis_.size()); ++t) key += weight_key(delta_, basis_[static_cast<size_t>(t)]);
    long cert = ceil_div((params_.p - 1) * key, delta_.D());
    return std::min<long>(cert, params_.nt);
  }

  // Precision to which traces tr(A^{a k}) of the truncation are exact.
  long certified_trace_precision() const {
    return std::min<long>(ceil_div((params_.p - 1) * excluded_key_, delta_.D()), params_.nt);
  }

 private:
  RectDelta delta_;
  DworkParams params_;
  ZmodPN ring_;
  std::vector<LatticePoint> basis_;
  std::optional<SplittingFunction> split_;
  long excluded_key_ = 0;
};

inline DworkMatrix assemble_matrix(const CoeffMap& f, const RectDelta& delta, const DworkParams& params) {
  return DworkMatrix(delta, f, params);
}

enum class CharMethod { kAuto, kBerkowitz, kTraces };

struct CharSeries {
  std::vector<Series> H;        // H_0 .. H_kmax
  std::vector<long> precision;  // H_k exact modulo T^{precision[k]}
  DworkParams params;
  long basis_size = 0;
  CharMethod method = CharMethod::kBerkowitz;

  long kmax() const { return static_cast<long>(H.size()) - 1; }
};

// det(1 - A s) mod s^{kmax+1} by the division-free Berkowitz recurrence: adding
// row/column r multiplies by 1 - a_rr s - sum_k (R A_r^k C) s^{k+2}, truncated.
inline std::vector<Series> berkowitz(const SeriesRing<ZmodPN>& S, const std::vector<std::vector<Series>>& A, long kmax) {
  const size_t n = A.size();
  std::vector<Series> q(static_cast<size_t>(kmax) + 1, S.zero());
  q[0] = S.one();
  for (size_t r = 0; r < n; ++r) {
    std::vector<Series> t(static_cast<size_t>(kmax) + 1, S.zero());
    t[0] = S.one();
    if (kmax >= 1) t[1] = S.neg(A[r][r]);
    std::vector<Series> v(r);
    for (size_t i = 0; i < r; ++i) v[i] = A[i][r];
    for (long k = 2; k <= kmax && r > 0; ++k) {
      Series dot = S.zero();
      for (size_t i = 0; i < r; ++i) S.mul_add(dot, A[r][i], v[i]);
      t[static_cast<size_t>(k)] = S.neg(dot);
      if (k == kmax) break;
      std::vector<Series> w(r, S.zero());
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) S.mul_add(w[i], A[i][j], v[j]);
      v = std::move(w);
    }
    std::vector<Series> next(static_cast<size_t>(kmax) + 1, S.zero());
    long top = std::min<long>(kmax, static_cast<long>(r) + 1);
    for (long d = 0; d <= top; ++d)
      for (long i = 0; i <= d; ++i) S.mul_add(next[static_cast<size_t>(d)], t[static_cast<size_t>(i)], q[static_cast<size_t>(d - i)]);
    q = std::move(next);
  }
  return q;
}

// Power sums p_k = tr(A^k) for k <= kmax over a materialized matrix.
inline std::vector<Series> matrix_power_traces(const SeriesRing<ZmodPN>& S, const std::vector<std::vector<Series>>& A,
                                               long kmax) {
  const size_t n = A.size();
  std::vector<Series> out(static_cast<size_t>(kmax) + 1, S.zero());
  out[0] = S.from_int(static_cast<long>(n));
  // Columns of A^k e_c, one basis vector at a time.
  for (size_t c = 0; c < n; ++c) {
    std::vector<Series> v(n, S.zero());
    v[c] = S.one();
    for (long k = 1; k <= kmax; ++k) {
      std::vector<Series> w(n, S.zero());
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) S.mul_add(w[i], A[i][j], v[j]);
      v = std::move(w);
      out[static_cast<size_t>(k)] = S.add(out[static_cast<size_t>(k)], v[c]);
    }
  }
  return out;
}

// H from power sums: k H_k = -sum_{i=1}^k p_i H_{k-i}; needs k invertible (k < p).
inline std::vector<Series> char_from_power_sums(const SeriesRing<ZmodPN>& S, const std::vector<Series>& ps, long kmax) {
  const ZmodPN& R = S.coeff_ring();
  std::vector<Series> H(static_cast<size_t>(kmax) + 1, S.zero());
  H[0] = S.one();
  for (long k = 1; k <= kmax; ++k) {
    if (k % R.p() == 0) throw Error(ErrorCode::kBadInput, "trace route needs kmax < p");
    Series acc = S.zero();
    for (long i = 1; i <= k; ++i) S.mul_add(acc, ps[static_cast<size_t>(i)], H[static_cast<size_t>(k - i)]);
    H[static_cast<size_t>(k)] = S.scale(S.neg(acc), R.inv(R.from_int(k)));
  }
  return H;
}

// Power sums from H (division free): p_k = -k H_k - sum_{i=1}^{k-1} p_i H_{k-i}.
inline std::vector<Series> power_sums_from_h(const SeriesRing<ZmodPN>& S, const std::vector<Series>& H, long kmax) {
  std::vector<Series> ps(static_cast<size_t>(kmax) + 1, S.zero());
  for (long k = 1; k <= kmax; ++k) {
    Series acc = S.scale(H[static_cast<size_t>(k)], S.coeff_ring().from_int(k));
    for (long i = 1; i < k; ++i) S.mul_add(acc, ps[static_cast<size_t>(i)], H[static_cast<size_t>(k - i)]);
    ps[static_cast<size_t>(k)] = S.neg(acc);
  }
  ps[0] = S.from_int(0);
  return ps;
}

// tr(A^k) for k in {1, 2} straight from the splitting function, skipping terms
// whose T-order bound (p-1)(w(i)+w(j)) already exceeds the precision. Valid for a = 1.
inline std::vector<Series> low_traces(const DworkMatrix& M, long kmax) {
  if (kmax > 2 || M.params().a != 1) throw Error(ErrorCode::kBadInput, "low_traces handles k <= 2 with a = 1");
  const auto& S = M.series_ring();
  const auto& B = M.basis();
  const long p = M.params().p, D = M.delta().D(), nt = M.params().nt;
  std::vector<Series> out(static_cast<size_t>(kmax) + 1, S.zero());
  out[0] = S.from_int(static_cast<long>(B.size()));
  if (kmax >= 1)
    for (const auto& i : B) out[1] = S.add(out[1], M.entry(i, i));
  if (kmax >= 2)
    for (const auto& i : B)
      for (const auto& j : B) {
        long bound = ceil_div((p - 1) * (weight_key(M.delta(), i) + weight_key(M.delta(), j)), D);
        if (bound >= nt) continue;
        S.mul_add(out[2], M.entry(i, j), M.entry(j, i));
      }
  return out;
}

inline CharSeries char_series(const DworkMatrix& M, long kmax, CharMethod method = CharMethod::kAuto) {
  if (kmax < 0) throw Error(ErrorCode::kOutOfRange, "kmax must be >= 0");
  const auto& S = M.series_ring();
  CharSeries out;
  out.params = M.params();
  out.basis_size = static_cast<long>(M.size());
  if (method == CharMethod::kAuto) method = (kmax <= 2 && M.params().a == 1) ? CharMethod::kTraces : CharMethod::kBerkowitz;
  out.method = method;
  if (method == CharMethod::kTraces) {
    if (kmax >= M.params().p) throw Error(ErrorCode::kBadInput, "trace route needs kmax < p");
    std::vector<Series> ps;
    if (kmax <= 2 && M.params().a == 1) ps = low_traces(M, kmax);
    else ps = matrix_power_traces(S, M.materialize(), kmax);
    out.H = char_from_power_sums(S, ps, kmax);
    for (long k = 0; k <= kmax; ++k) out.precision.push_back(k == 0 ? M.params().nt : M.certified_trace_precision());
  } else {
    out.H = berkowitz(S, M.materialize(), kmax);
    for (long k = 0; k <= kmax; ++k) out.precision.push_back(k == 0 ? M.params().nt : M.certified_precision(k));
  }
  return out;
}

// The same series read modulo a smaller power of p.
inline CharSeries reduce_precision(const CharSeries& C, int np) {
  if (np > C.params.np) throw Error(ErrorCode::kPrecisionExhausted, "cannot raise p-adic precision");
  ZmodPN R(C.params.p, np);
  CharSeries out = C;
  out.params.np = np;
  for (auto& h : out.H)
    for (auto& c : h.coeffs) c = R.from_bigint(BigInt(static_cast<unsigned long>(c)));
  return out;
}

struct NpResult {
  NewtonPolygon polygon;
  std::vector<SeriesOrder> orders;  // T-orders (or pi-valuations) of H_k
  bool partial = false;             // some order is only a lower bound
};

// Polygon of (k, ord_T(H_k) / (a(p-1))). Orders at or above the certified
// precision are lower bounds; the polygon then uses the bound and is flagged.
inline NpResult np_c(const CharSeries& C) {
  NpResult out;
  const auto& params = C.params;
  ZmodPN R(params.p, params.np);
  SeriesRing<ZmodPN> S(R, params.nt);
  std::vector<std::pair<long, Valuation>> pts;
  const long scale = params.a * (params.p - 1);
  for (long k = 0; k <= C.kmax(); ++k) {
    int low = S.lowest(C.H[static_cast<size_t>(k)]);
    SeriesOrder o = low < C.precision[static_cast<size_t>(k)] ? SeriesOrder{low, true}
                                                              : SeriesOrder{C.precision[static_cast<size_t>(k)], false};
    if (!o.exact) out.partial = true;
    out.orders.push_back(o);
    pts.emplace_back(k, make_rational(o.value, scale));
  }
  out.polygon = NewtonPolygon::from_valuations(pts);
  return out;
}

// Recompute with a larger basis and T-precision; stable iff the polygon on
// [0, kmax] is unchanged and fully certified in both runs.
inline bool stability_check(const CoeffMap& f, const RectDelta& delta, const DworkParams& params, long kmax) {
  auto run = [&](const DworkParams& prm) -> std::optional<NpResult> {
    DworkMatrix M(delta, f, prm);
    if (static_cast<long>(M.size()) < kmax) return std::nullopt;
    return np_c(char_series(M, kmax, CharMethod::kBerkowitz));
  };
  DworkParams bigger = params;
  bigger.wmax = params.wmax + 1;
  bigger.nt = params.nt + params.a * static_cast<int>(params.p - 1);
  auto r1 = run(params);
  auto r2 = run(bigger);
  if (!r1 || !r2) return false;
  if (r1->partial || r2->partial) return false;
  return r1->polygon == r2->polygon;
}

struct SpecializedSeries {
  int m = 1;
  std::vector<CycInt> values;        // H_k(zeta_{p^m} - 1) mod p^Np
  std::vector<SeriesOrder> valuations;
  NewtonPolygon polygon;             // (k, v_pi / (a(p-1)))
  bool partial = false;
};

inline SpecializedSeries specialize_char(const CharSeries& C, int m) {
  const auto& params = C.params;
  ZmodPN R(params.p, params.np);
  SpecializedSeries out;
  out.m = m;
  std::vector<std::pair<long, Valuation>> pts;
  const long scale = params.a * (params.p - 1);
  for (long k = 0; k <= C.kmax(); ++k) {
    // Only the certified part of H_k is meaningful.
    Series h = C.H[static_cast<size_t>(k)];
    long prec = C.precision[static_cast<size_t>(k)];
    for (long t = prec; t < h.precision(); ++t) h.coeffs[static_cast<size_t>(t)] = 0;
    auto value = specialize_T(R, h, m);
    auto v = pi_valuation(value);
    // The discarded tail has valuation >= prec.
    if (v.exact && v.value >= prec) v = {prec, false};
    if (!v.exact) {
      out.partial = true;
      if (v.value < 0 || v.value > prec) v.value = std::min<long>(prec, params.np * euler_phi_prime_power(params.p, m));
    }
    out.values.push_back(value);
    out.valuations.push_back(v);
    pts.emplace_back(k, make_rational(v.value, scale));
  }
  out.polygon = NewtonPolygon::from_valuations(pts);
  return out;
}

// First D slopes from the C-polygon, then their complements 2 - s in reverse.
inline SlopeMultiset l_polygon(const NewtonPolygon& c_polygon, long D) {
  if (c_polygon.length() < D) throw Error(ErrorCode::kIncompleteInput, "C-polygon shorter than D");
  auto first = c_polygon.truncate(D).slopes();
  SlopeMultiset out = first;
  for (const auto& [s, m] : first) out.add(Rational(2) - s, m);
  return out;
}

// S_k(T) = (q^k - 1)^2 p_k, p_k the power sums of the reciprocal roots of C.
struct PowerSums {
  std::vector<Series> p;  // p_1..p_kmax at index k
  std::vector<Series> S;  // exponential sums predicted by the trace formula
  long precision = 0;     // exact modulo T^precision
};

inline PowerSums power_sums_from_c(const CharSeries& C, long kmax) {
  if (kmax > C.kmax()) throw Error(ErrorCode::kOutOfRange, "kmax beyond the computed H range");
  const auto& params = C.params;
  ZmodPN R(params.p, params.np);
  SeriesRing<ZmodPN> S(R, params.nt);
  PowerSums out;
  out.p = power_sums_from_h(S, C.H, kmax);
  out.S.assign(static_cast<size_t>(kmax) + 1, S.zero());
  out.precision = params.nt;
  for (long k = 1; k <= kmax; ++k) {
    BigInt q;
    mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(params.p), static_cast<unsigned long>(params.a * k));
    BigInt factor = (q - 1) * (q - 1);
    out.S[static_cast<size_t>(k)] = S.scale(out.p[static_cast<size_t>(k)], R.from_bigint(factor));
    out.precision = std::min(out.precision, C.precision[static_cast<size_t>(k)]);
  }
  return out;
}

// Default T-precision a(p-1)(ceil(height) + 4) for a polygon whose height at D is `height`.
inline int default_nt(long p, int a, const Rational& height) {
  return static_cast<int>(a * (p - 1) * (ceil_of(height).get_si() + 4));
}

}  // namespace asw
