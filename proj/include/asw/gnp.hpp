#pragma once

// Closed-form generic Newton polygons: residue classes, the assignment
// quantities M and epsilon, the slope terms beta_n(p), and the polygons and
// slope multisets assembled from them.

#include <map>
#include <string>
#include <vector>

#include "asw/assignment.hpp"
#include "asw/error.hpp"
#include "asw/polygon.hpp"
#include "asw/polytope.hpp"
#include "asw/rational.hpp"

namespace asw {

struct ResidueClass {
  long r1 = 0;
  long r2 = 0;

  static ResidueClass of_prime(const RectDelta& delta, long p) {
    return {pos_mod(p, delta.d1()), pos_mod(p, delta.d2())};
  }

  bool is_trivial() const { return r1 == 1 && r2 == 1; }
  bool contains(const RectDelta& delta, long p) const {
    return pos_mod(p, delta.d1()) == r1 && pos_mod(p, delta.d2()) == r2;
  }
  // Realizable by integers (hence possibly by primes): r1 = r2 mod gcd(d1, d2).
  bool compatible(const RectDelta& delta) const { return pos_mod(r1 - r2, delta.gcd()) == 0; }
  bool operator==(const ResidueClass&) const = default;
  auto operator<=>(const ResidueClass&) const = default;
};

inline std::string to_string(const ResidueClass& r) {
  return "(" + std::to_string(r.r1) + "," + std::to_string(r.r2) + ")";
}

// Every (r1, r2) in Z/d1 x Z/d2 other than (1, 1).
inline std::vector<ResidueClass> nontrivial_classes(const RectDelta& delta) {
  std::vector<ResidueClass> out;
  for (long a = 0; a < delta.d1(); ++a)
    for (long b = 0; b < delta.d2(); ++b)
      if (!(a == 1 && b == 1)) out.push_back({a, b});
  return out;
}

// How the per-entry cost of a permutation is measured.
//  kFormula: 1 - r_c/d_c from the residue of p*i - j in the dominant coordinate c
//          of i, with the origin anchored at 0 and the quadrant mask.
//  kExact: the true pi-order of B_{p i - j}, namely ceil(w(p i - j)), minus the
//          weight shift p w(i) - w(j); needs the actual multiplier (the prime).
enum class CostModel { kFormula, kExact };

inline const char* to_string(CostModel m) { return m == CostModel::kFormula ? "formula" : "exact"; }

// Coordinatewise multiplier (c1, c2) standing in for p; equal to (p, p) for a
// prime, and allowed to differ when a residue class has no integer representative.
struct Multiplier {
  long c1 = 0;
  long c2 = 0;
  static Multiplier of(long p) { return {p, p}; }
  long get(int t) const { return t == 0 ? c1 : c2; }
};

struct CostMatrix {
  std::vector<LatticePoint> points;
  CostTable table;  // denominator D

  bool forbidden(size_t i, size_t j) const { return table.forbidden(i, j); }
  Rational entry(size_t i, size_t j) const { return make_rational(table.cost[i][j], table.denominator); }
};

// The residue vector ((p i - j) mod d1, (p i - j) mod d2) for a residue class.
inline LatticePoint residue_vector(const RectDelta& delta, const ResidueClass& R, const LatticePoint& i,
                                   const LatticePoint& j) {
  return {pos_mod(R.r1 * i.v1 - j.v1, delta.d1()), pos_mod(R.r2 * i.v2 - j.v2, delta.d2())};
}

// Quadrant mask: B_{p i - j} vanishes identically when a coordinate of i is 0
// but the matching coordinate of j is positive.
inline bool quadrant_forbidden(const LatticePoint& i, const LatticePoint& j) {
  if (i.is_origin()) return !j.is_origin();
  return (i.v1 == 0 && j.v1 > 0) || (i.v2 == 0 && j.v2 > 0);
}

// Numerator over D of the formula cost 1 - r_c/d_c; kForbidden when masked.
inline long formula_cost_key(const RectDelta& delta, const ResidueClass& R, const LatticePoint& i,
                           const LatticePoint& j) {
  if (quadrant_forbidden(i, j)) return CostTable::kForbidden;
  if (i.is_origin()) return 0;
  LatticePoint r = residue_vector(delta, R, i, j);
  int c = dominant_coordinate(delta, i);
  long dc = delta.side(c);
  long rc = c == 0 ? r.v1 : r.v2;
  return (dc - rc) * (delta.D() / dc);
}

// Numerator over D of ceil(w(m i - j)) - w(m i) + w(j).
inline long exact_cost_key(const RectDelta& delta, const Multiplier& m, const LatticePoint& i,
                           const LatticePoint& j) {
  LatticePoint v{m.c1 * i.v1 - j.v1, m.c2 * i.v2 - j.v2};
  if (v.v1 < 0 || v.v2 < 0) return CostTable::kForbidden;
  if (v.is_origin()) return 0;
  const long D = delta.D();
  long ord = ceil_div(weight_key(delta, v), D);
  LatticePoint mi{m.c1 * i.v1, m.c2 * i.v2};
  return ord * D - weight_key(delta, mi) + weight_key(delta, j);
}

struct CostSpec {
  CostModel model = CostModel::kFormula;
  ResidueClass R;
  Multiplier mult;  // used by kExact

  static CostSpec formula(const ResidueClass& R) { return {CostModel::kFormula, R, {}}; }
  static CostSpec exact(const RectDelta& delta, long p) {
    return {CostModel::kExact, ResidueClass::of_prime(delta, p), Multiplier::of(p)};
  }
};

inline CostMatrix cost_matrix(const RectDelta& delta, const CostSpec& spec, const std::vector<LatticePoint>& S) {
  CostMatrix out;
  out.points = S;
  out.table.denominator = delta.D();
  out.table.cost.assign(S.size(), std::vector<long>(S.size(), 0));
  for (size_t a = 0; a < S.size(); ++a)
    for (size_t b = 0; b < S.size(); ++b)
      out.table.cost[a][b] = spec.model == CostModel::kFormula ? formula_cost_key(delta, spec.R, S[a], S[b])
                                                             : exact_cost_key(delta, spec.mult, S[a], S[b]);
  return out;
}

inline CostMatrix cost_matrix(const RectDelta& delta, const ResidueClass& R, const std::vector<LatticePoint>& S) {
  return cost_matrix(delta, CostSpec::formula(R), S);
}

enum class Solver { kExhaustive, kHungarian, kAuto };

inline AssignmentResult min_assignment(const CostMatrix& c, Solver solver = Solver::kAuto) {
  if (solver == Solver::kExhaustive || (solver == Solver::kAuto && c.points.size() <= 12))
    return min_assignment_exhaustive(c.table);
  return min_assignment_hungarian(c.table);
}

// ---------------------------------------------------------------------------
// Formula side
// ---------------------------------------------------------------------------

struct SlopeTerm {
  long n = 0;
  long k_n = 0;
  long W = 0;       // W_Delta(n)
  long level = 0;   // l of the genericity polynomial
  Rational M;       // M_{F_n}^l
  Rational eps;     // epsilon_n

  // beta_n(t) = n/D + eps_n/(t-1)
  Rational beta(long t, long D) const { return make_rational(n, D) + eps / (t - 1); }
};

struct GnpFormula {
  RectDelta delta;
  CostSpec spec;
  std::vector<SlopeTerm> terms;  // one per n in I_D, increasing

  const SlopeTerm& term(long n) const {
    for (const auto& t : terms)
      if (t.n == n) return t;
    throw Error(ErrorCode::kOutOfRange, "n not in I_D: " + std::to_string(n));
  }
};

// M_{F_n} for every n in I_D, with optional levels l(n) adding l/D, and
// eps_n = (M_{F_n} - M_{F_prev(n)}) / W(n), eps_0 = 0.
inline GnpFormula gnp_formula(const RectDelta& delta, const CostSpec& spec, const std::map<long, long>& levels = {},
                              Solver solver = Solver::kAuto) {
  GnpFormula out{delta, spec, {}};
  Rational prev_M = 0;
  for (long n : i_set(delta)) {
    SlopeTerm t;
    t.n = n;
    t.k_n = k_n(delta, n);
    t.W = w_count(delta, n);
    auto it = levels.find(n);
    t.level = it == levels.end() ? 0 : it->second;
    auto S = filtration(delta, n);
    t.M = min_assignment(cost_matrix(delta, spec, S), solver).value + make_rational(t.level, delta.D());
    t.eps = n == 0 ? Rational(0) : (t.M - prev_M) / t.W;
    prev_M = t.M;
    out.terms.push_back(t);
  }
  return out;
}

// The trivial residue class: every eps_n = 0, so the formulas reduce to the Hodge polygons.
inline GnpFormula hodge_formula(const RectDelta& delta) {
  GnpFormula out{delta, CostSpec::formula(ResidueClass{1, 1}), {}};
  for (long n : i_set(delta)) {
    SlopeTerm t;
    t.n = n;
    t.k_n = k_n(delta, n);
    t.W = w_count(delta, n);
    out.terms.push_back(t);
  }
  return out;
}

inline Rational epsilon(const RectDelta& delta, const ResidueClass& R, long n) {
  if (!in_i_set(delta, n)) throw Error(ErrorCode::kOutOfRange, "n not in I_D: " + std::to_string(n));
  return gnp_formula(delta, CostSpec::formula(R)).term(n).eps;
}

inline void require_prime_in_class(const RectDelta& delta, const ResidueClass& R, long p) {
  if (!is_prime(p) || !R.contains(delta, p) || delta.D() % p == 0)
    throw Error(ErrorCode::kResidueMismatch,
                "p=" + std::to_string(p) + " is not a prime of class " + to_string(R) + " prime to D");
}

// Slopes beta_n(p)^{W(n)}, n in I_D (length D).
inline SlopeMultiset snp_slopes(const GnpFormula& F, long p) {
  require_prime_in_class(F.delta, F.spec.R, p);
  SlopeMultiset s;
  for (const auto& t : F.terms) s.add(t.beta(p, F.delta.D()), t.W);
  return s;
}

inline NewtonPolygon snp(const GnpFormula& F, long p) { return NewtonPolygon::from_slopes(snp_slopes(F, p)); }

inline NewtonPolygon snp(const RectDelta& delta, const ResidueClass& R, long p) {
  return snp(gnp_formula(delta, CostSpec::formula(R)), p);
}

// Lower convex hull of (k, min over minimal-weight k-subsets S of sum w(S) + M_S/(p-1)).
inline NewtonPolygon gnp_brute(const RectDelta& delta, const CostSpec& spec, long p, long kmax,
                               long subset_budget = 100000) {
  if (kmax < 1) throw Error(ErrorCode::kOutOfRange, "kmax must be >= 1");
  std::vector<std::pair<long, Valuation>> pts{{0, Rational(0)}};
  // Enumerate weight levels until kmax points are covered.
  std::vector<LatticePoint> lower;
  long key = 0;
  long examined = 0;
  while (static_cast<long>(lower.size()) < kmax) {
    std::vector<LatticePoint> level;
    for (const auto& v : points_up_to_key(delta, key))
      if (weight_key(delta, v) == key) level.push_back(v);
    for (long take = 1; take <= static_cast<long>(level.size()) &&
                        static_cast<long>(lower.size()) + take <= kmax; ++take) {
      Rational best;
      bool have = false;
      std::vector<int> choose(level.size(), 0);
      std::fill(choose.end() - take, choose.end(), 1);
      do {
        if (++examined > subset_budget) throw Error(ErrorCode::kBudgetExceeded, "too many minimal-weight subsets");
        std::vector<LatticePoint> S = lower;
        for (size_t a = 0; a < level.size(); ++a)
          if (choose[a]) S.push_back(level[a]);
        sort_points(delta, S);
        Rational wsum = 0;
        for (const auto& v : S) wsum += weight(delta, v);
        Rational M;
        try {
          M = min_assignment(cost_matrix(delta, spec, S)).value;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kInfeasible) throw;
          continue;
        }
        Rational val = wsum + M / (p - 1);
        if (!have || val < best) {
          best = val;
          have = true;
        }
      } while (std::next_permutation(choose.begin(), choose.end()));
      long k = static_cast<long>(lower.size()) + take;
      if (have) pts.emplace_back(k, best);
      else pts.emplace_back(k, kInfinite);
    }
    lower.insert(lower.end(), level.begin(), level.end());
    ++key;
  }
  return NewtonPolygon::from_valuations(pts);
}

// {beta_n, 2 - beta_n}^{W(n)}: length 2D.
inline SlopeMultiset gnp_l(const GnpFormula& F, long p) {
  auto base = snp_slopes(F, p);
  SlopeMultiset out = base;
  for (const auto& [s, m] : base) out.add(Rational(2) - s, m);
  return out;
}

// {(i-1+beta_n)/P, (i+1-beta_n)/P}^{i W(n)} for i >= 1, P = p^{m-1}, slopes <= bound.
inline SlopeMultiset gnp_c_m(const GnpFormula& F, long p, int m, const Rational& bound) {
  require_prime_in_class(F.delta, F.spec.R, p);
  const long P = ipow(p, m - 1);
  SlopeMultiset out;
  for (long i = 1;; ++i) {
    if (make_rational(i - 1, P) > bound) break;
    for (const auto& t : F.terms) {
      Rational b = t.beta(p, F.delta.D());
      Rational lo = (Rational(i - 1) + b) / P;
      Rational hi = (Rational(i + 1) - b) / P;
      if (lo <= bound) out.add(lo, i * t.W);
      if (hi <= bound) out.add(hi, i * t.W);
    }
  }
  return out;
}

inline SlopeMultiset gnp_c(const GnpFormula& F, long p, const Rational& bound) { return gnp_c_m(F, p, 1, bound); }

// prod_{i=1}^{2P-1} prod_n {beta_{n,i}, 2 - beta_{n,i}}^{N_{n,i}}, P = p^{m-1}.
inline SlopeMultiset gnp_l_m(const GnpFormula& F, long p, int m) {
  require_prime_in_class(F.delta, F.spec.R, p);
  const long P = ipow(p, m - 1);
  SlopeMultiset out;
  for (long i = 1; i <= 2 * P - 1; ++i) {
    long N = i <= P ? i : 2 * P - i;
    for (const auto& t : F.terms) {
      Rational b = (Rational(i - 1) + t.beta(p, F.delta.D())) / P;
      out.add(b, N * t.W);
      out.add(Rational(2) - b, N * t.W);
    }
  }
  return out;
}

// prod_{i=1}^{2P-1} prod_j ((i-1+alpha_j)/P)^{N(i)}, N(i) = i for i <= P, else 2P - i.
inline SlopeMultiset weighted_progression(const SlopeMultiset& base, long p, int m) {
  const long P = ipow(p, m - 1);
  SlopeMultiset out;
  for (long i = 1; i <= 2 * P - 1; ++i) {
    long N = i <= P ? i : 2 * P - i;
    for (const auto& [a, mult] : base) out.add((Rational(i - 1) + a) / P, N * mult);
  }
  return out;
}

// Slopes of NP_q((1-qs) Z(A_m(f), s)^{-1}): each level-k GNP_L repeated p^{k-1}(p-1) times.
inline SlopeMultiset zeta_polygon(const GnpFormula& F, long p, int m) {
  SlopeMultiset out;
  for (int k = 1; k <= m; ++k) out.add(gnp_l_m(F, p, k), ipow(p, k - 1) * (p - 1));
  return out;
}

struct EigenBucket {
  long i = 0;             // bucket (i-1, i]
  long computed = 0;      // multiplicity of slopes in the bucket
  long claimed = 0;       // (2i-1) d1 d2 + 1 + delta
  bool match = false;
};

struct EigencurveReport {
  long slope_zero = 0;  // degree of the closed point A_{f,0}
  long delta = 0;
  std::vector<EigenBucket> buckets;
  long total_below = 0;  // multiplicity of slopes in [0, i_max]
};

// delta_Delta = W(D) when slope 1 occurs in GNP_L (the "epsilon_D = 0" case), else 0.
inline long eigencurve_delta(const GnpFormula& F, long p) {
  return gnp_l(F, p).multiplicity(Rational(1)) > 0 ? w_count(F.delta, F.delta.D()) : 0;
}

inline EigencurveReport eigencurve_components(const SlopeMultiset& C, const Rational& complete_up_to,
                                              const GnpFormula& F, long p, long i_max) {
  if (complete_up_to < i_max)
    throw Error(ErrorCode::kIncompleteInput, "slopes known only up to " + to_string(complete_up_to));
  EigencurveReport rep;
  rep.slope_zero = C.multiplicity(Rational(0));
  rep.delta = eigencurve_delta(F, p);
  const long D = F.delta.D();
  for (long i = 1; i <= i_max; ++i) {
    EigenBucket b;
    b.i = i;
    b.computed = C.count_in(Rational(i - 1), Rational(i));
    b.claimed = (2 * i - 1) * D + 1 + rep.delta;
    b.match = b.computed == b.claimed;
    rep.buckets.push_back(b);
  }
  for (const auto& [s, m] : C)
    if (s <= i_max) rep.total_below += m;
  return rep;
}

struct HodgeGap {
  long n = 0;
  long k_n = 0;
  Rational cumulative;   // snp(k_n) - HP_C(k_n) = M_{F_n}/(p-1)
  Rational per_segment;  // eps_n/(p-1)
};

inline std::vector<HodgeGap> gap_to_hodge(const GnpFormula& F, long p) {
  auto s = snp(F, p);
  auto h = hodge_c(F.delta, make_rational(F.delta.D() - 1, F.delta.D()));
  std::vector<HodgeGap> out;
  for (const auto& t : F.terms) {
    HodgeGap g;
    g.n = t.n;
    g.k_n = t.k_n;
    g.cumulative = s.value_at(t.k_n) - h.value_at(t.k_n);
    g.per_segment = t.eps / (p - 1);
    out.push_back(g);
  }
  return out;
}

}  // namespace asw
