#pragma once

// Brute-force exponential sums over (F_{q^k}^*)^2, as cyclotomic integers for a
// fixed character of conductor p^m and as truncated T-series, plus the
// cross-check of the Dwork pipeline against them.

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asw/dwork.hpp"
#include "asw/error.hpp"
#include "asw/padic.hpp"
#include "asw/rational.hpp"
#include "asw/symbolic.hpp"

namespace asw {

struct SumRequest {
  long p = 5;
  int a = 1;
  int k = 1;
  long budget = 1'000'000;          // maximum number of points (q^k - 1)^2
  std::vector<long> modulus;        // optional irreducible modulus of degree a*k over F_p
};

// Histogram of t(x) = Tr(f^(x^)) mod p^M over the torus points, where hats are
// Teichmueller lifts into GR(p^M, a k).
inline std::vector<BigInt> trace_histogram(const CoeffMap& f, const SumRequest& req, int M) {
  const int e = req.a * req.k;
  BigInt q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(req.p), static_cast<unsigned long>(e));
  BigInt points = (q - 1) * (q - 1);
  if (points > req.budget) throw Error(ErrorCode::kBudgetExceeded, "exponential sum needs " + points.get_str() + " points");
  GaloisRing G = req.modulus.empty() ? GaloisRing(req.p, M, e) : GaloisRing(req.p, M, req.modulus);
  const ZmodPN& Z = G.base();
  const long Q = q.get_si();

  // Units of the residue field, Teichmueller-lifted. With the default (primitive)
  // modulus they are the powers of the lifted generator, in that order.
  std::vector<GaloisRing::Elem> units;
  if (req.modulus.empty()) {
    auto w = G.teichmuller(G.generator());
    auto cur = G.one();
    for (long i = 0; i + 1 < Q; ++i) {
      units.push_back(cur);
      cur = G.mul(cur, w);
    }
  } else {
    for (long code = 1; code < Q; ++code) {
      GaloisRing::Elem x = G.zero();
      long c = code;
      for (int i = 0; i < e; ++i, c /= req.p) x[static_cast<size_t>(i)] = static_cast<u64>(c % req.p);
      units.push_back(G.teichmuller(x));
    }
  }

  long max1 = 0, max2 = 0;
  std::vector<std::pair<LatticePoint, u64>> terms;
  for (const auto& [v, c] : f) {
    if (pos_mod(c, req.p) == 0) continue;
    max1 = std::max(max1, v.v1);
    max2 = std::max(max2, v.v2);
    terms.emplace_back(v, teichmuller_int(Z, c));
  }
  auto powers = [&](long maxd) {
    std::vector<std::vector<GaloisRing::Elem>> table;
    for (const auto& x : units) {
      std::vector<GaloisRing::Elem> row{G.one()};
      for (long d = 1; d <= maxd; ++d) row.push_back(G.mul(row.back(), x));
      table.push_back(std::move(row));
    }
    return table;
  };
  auto P1 = powers(max1), P2 = powers(max2);

  BigInt pm;
  mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(req.p), static_cast<unsigned long>(M));
  std::vector<BigInt> hist(pm.get_ui(), 0);
  std::vector<long> counts(pm.get_ui(), 0);
  for (size_t i = 0; i < units.size(); ++i)
    for (size_t j = 0; j < units.size(); ++j) {
      GaloisRing::Elem s = G.zero();
      for (const auto& [v, c] : terms)
        s = G.add(s, G.scale(G.mul(P1[i][static_cast<size_t>(v.v1)], P2[j][static_cast<size_t>(v.v2)]), c));
      ++counts[G.trace(s)];
    }
  for (size_t t = 0; t < counts.size(); ++t) hist[t] = counts[t];
  return hist;
}

// sum over the torus of zeta_{p^m}^{t(x)}, exact in Z[zeta_{p^m}].
inline CycInt exp_sum_chi(const CoeffMap& f, const SumRequest& req, int m) {
  auto hist = trace_histogram(f, req, m);
  std::vector<BigInt> poly(hist.begin(), hist.end());
  return CycInt::from_poly(req.p, m, poly);
}

// p-adic digits needed so that binomial(t, j) mod p^np is determined for j < nt.
inline int oracle_trace_precision(long p, int np, int nt) {
  int extra = 0;
  long pw = 1;
  while (pw < nt) {
    pw *= p;
    ++extra;
  }
  return np + extra;
}

// sum over the torus of (1+T)^{t(x)} mod (p^np, T^nt).
inline Series exp_sum_T(const CoeffMap& f, const SumRequest& req, int np, int nt) {
  const int M = oracle_trace_precision(req.p, np, nt);
  auto hist = trace_histogram(f, req, M);
  ZmodPN R(req.p, np);
  SeriesRing<ZmodPN> S(R, nt);
  Series out = S.zero();
  for (size_t t = 0; t < hist.size(); ++t) {
    if (hist[t] == 0) continue;
    u64 c = R.from_bigint(hist[t]);
    for (int j = 0; j < nt && static_cast<size_t>(j) <= t; ++j) {
      BigInt b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(t), static_cast<unsigned long>(j));
      out.coeffs[static_cast<size_t>(j)] = R.add(out.coeffs[static_cast<size_t>(j)], R.mul(c, R.from_bigint(b)));
    }
  }
  return out;
}

struct CrossCheckParams {
  int np = 2;
  int nt = 40;
  std::vector<int> ks{1, 2};
  std::vector<int> ms{1};  // characters checked in addition to the T-series
  long budget = 1'000'000;
};

struct CrossCheckRow {
  int k = 0;
  std::string mode;            // "T" or "chi:m" or "chi:m/oracle" (commuting square)
  bool pass = false;
  long first_mismatch = -1;    // T-degree (T mode) or coefficient index (chi mode)
  std::string note;
};

struct CrossCheckReport {
  std::vector<CrossCheckRow> rows;
  std::vector<std::string> warnings;
  long precision = 0;     // T-precision of the Dwork side
  long basis_size = 0;
  bool pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

// Dwork side of the cross-check: the predicted S_k(T) mod (p^np, T^nt), with a
// basis large enough that every omitted monomial contributes only beyond T^nt.
struct DworkSums {
  std::vector<Series> S;  // index k
  long precision = 0;
  long basis_size = 0;
};

inline DworkSums dwork_sums(const CoeffMap& f, const RectDelta& delta, long p, int a, int kmax, int np, int nt) {
  DworkParams prm;
  prm.p = p;
  prm.a = a;
  prm.np = np;
  prm.nt = nt;
  // All points with (p-1) w < nt.
  prm.wmax = make_rational(static_cast<long>(nt) * delta.D() - 1, (p - 1) * delta.D());
  DworkMatrix M(delta, f, prm);
  CharSeries C = char_series(M, kmax, CharMethod::kTraces);
  PowerSums ps = power_sums_from_c(C, kmax);
  return {ps.S, ps.precision, static_cast<long>(M.size())};
}

inline CrossCheckReport cross_check(const CoeffMap& f, const RectDelta& delta, long p, int a, const CrossCheckParams& params,
                                    std::optional<std::vector<Series>> injected_dwork = std::nullopt) {
  CrossCheckReport report;
  if (params.ks.empty()) {
    report.warnings.push_back("empty k range: nothing compared");
    return report;
  }
  int kmax = 0;
  for (int k : params.ks) kmax = std::max(kmax, k);
  // Refuse before the (much costlier) Dwork side if the oracle cannot run.
  BigInt q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(a * kmax));
  if ((q - 1) * (q - 1) > params.budget)
    throw Error(ErrorCode::kBudgetExceeded, "exponential sum needs " + BigInt((q - 1) * (q - 1)).get_str() + " points");
  std::vector<Series> predicted;
  if (injected_dwork) {
    predicted = *injected_dwork;
    report.precision = params.nt;
  } else {
    auto ds = dwork_sums(f, delta, p, a, kmax, params.np, params.nt);
    predicted = ds.S;
    report.precision = ds.precision;
    report.basis_size = ds.basis_size;
  }
  ZmodPN R(p, params.np);
  for (int k : params.ks) {
    SumRequest req;
    req.p = p;
    req.a = a;
    req.k = k;
    req.budget = params.budget;
    Series oracle = exp_sum_T(f, req, params.np, params.nt);
    const Series& dw = predicted[static_cast<size_t>(k)];
    CrossCheckRow row{k, "T", true, -1, ""};
    for (long j = 0; j < std::min<long>(params.nt, report.precision); ++j)
      if (oracle.coeffs[static_cast<size_t>(j)] != dw.coeffs[static_cast<size_t>(j)]) {
        row.pass = false;
        row.first_mismatch = j;
        row.note = "oracle " + R.to_bigint(oracle.coeffs[static_cast<size_t>(j)]).get_str() + " vs dwork " +
                   R.to_bigint(dw.coeffs[static_cast<size_t>(j)]).get_str();
        break;
      }
    report.rows.push_back(row);

    for (int m : params.ms) {
      const long need = params.np * euler_phi_prime_power(p, m);
      if (params.nt < need) {
        report.warnings.push_back("chi:" + std::to_string(m) + " skipped: needs N_T >= " + std::to_string(need));
        continue;
      }
      CycInt chi = exp_sum_chi(f, req, m).reduced(params.np);
      auto compare = [&](const CycInt& other, const std::string& mode) {
        CrossCheckRow r{k, mode, true, -1, ""};
        for (long i = 0; i < chi.degree(); ++i)
          if (chi.coeffs()[static_cast<size_t>(i)] != other.coeffs()[static_cast<size_t>(i)]) {
            r.pass = false;
            r.first_mismatch = i;
            break;
          }
        report.rows.push_back(r);
      };
      compare(specialize_T(R, dw, m), "chi:" + std::to_string(m));
      compare(specialize_T(R, oracle, m), "chi:" + std::to_string(m) + "/oracle");
    }
  }
  return report;
}

}  // namespace asw
