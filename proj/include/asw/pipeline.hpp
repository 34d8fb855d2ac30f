#pragma once

// End-to-end verification of one f: genericity, the Dwork polygon, the
// formula-side polygons, character specialization and the oracle cross-check,
// collected into a report with one row per claim.

#include <optional>
#include <string>
#include <vector>

#include "asw/dwork.hpp"
#include "asw/gnp.hpp"
#include "asw/oracle.hpp"
#include "asw/polygon.hpp"
#include "asw/report.hpp"
#include "asw/symbolic.hpp"
#include "asw/version.hpp"

namespace asw {

struct VerifyConfig {
  long d1 = 3, d2 = 3;
  long p = 5;
  int a = 1;
  int m = 1;
  CoeffMap f;
  int np = 2;                      // raised automatically for the specialization
  int nt = 0;                      // 0: a(p-1)(ceil(height) + 4)
  std::optional<Rational> wmax;    // default: slope bound 1 plus 2
  long kmax = 0;                   // 0: D
  long budget = 1'000'000;         // oracle points
  bool run_stability = true;
  bool run_oracle = true;
  bool run_exact_hull = true;
};

struct CheckRow {
  std::string name;
  bool asserted = false;
  std::optional<bool> pass;  // empty: not applicable
  std::string note;
};

struct VerifyReport {
  VerifyConfig config;
  int np = 0, nt = 0;
  Rational wmax;
  long kmax = 0;
  long basis_size = 0;
  std::vector<long> certified;  // per k
  ResidueClass R;
  bool trivial_class = false;
  std::optional<GenericityVerdict> genericity;
  std::string genericity_note;
  NpResult tadic;
  std::optional<SpecializedSeries> specialized;
  std::optional<NewtonPolygon> snp_polygon;
  std::optional<SlopeMultiset> gnp_l_slopes;
  std::optional<NewtonPolygon> exact_hull;
  std::optional<bool> stable;
  std::optional<CrossCheckReport> oracle;
  std::vector<CheckRow> rows;

  bool generic() const { return genericity && genericity->membership == Membership::kInU; }
  bool asserted_pass() const {
    for (const auto& r : rows)
      if (r.asserted && r.pass && !*r.pass) return false;
    return true;
  }
};

// Np large enough that pi-valuations up to a(p-1)*height are below the cap.
inline int specialization_np(long p, int a, int m, const Rational& height, int np) {
  long needed = floor_of(Rational(a * (p - 1)) * height / euler_phi_prime_power(p, m)).get_si() + 1;
  return std::max<int>(np, static_cast<int>(needed));
}

inline VerifyReport verify(const VerifyConfig& cfg) {
  VerifyReport rep;
  rep.config = cfg;
  RectDelta delta(cfg.d1, cfg.d2);
  if (!is_prime(cfg.p) || delta.D() % cfg.p == 0) throw Error(ErrorCode::kBadInput, "p must be a prime not dividing d1*d2");
  if (cfg.m < 1 || cfg.a < 1) throw Error(ErrorCode::kBadInput, "m and a must be >= 1");
  const long D = delta.D();
  rep.R = ResidueClass::of_prime(delta, cfg.p);
  rep.trivial_class = rep.R.is_trivial();
  rep.kmax = cfg.kmax > 0 ? cfg.kmax : D;

  try {
    rep.genericity = GenericityModel(delta, cfg.p).test(cfg.f);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBadReduction) throw;
    rep.genericity_note = e.what();
  }

  // Formula side and the reference height for the default precisions.
  NewtonPolygon hodge = hodge_c(delta, Rational(2)).truncate(std::min<long>(rep.kmax, hodge_c(delta, Rational(2)).length()));
  Rational height = hodge.value_at(std::min<long>(D, hodge.length()));
  std::optional<GnpFormula> F;
  if (!rep.trivial_class) {
    F = gnp_formula(delta, CostSpec::formula(rep.R));
    rep.snp_polygon = snp(*F, cfg.p);
    rep.gnp_l_slopes = gnp_l(*F, cfg.p);
    height = std::max(height, rep.snp_polygon->value_at(D));
  }
  rep.nt = cfg.nt > 0 ? cfg.nt : default_nt(cfg.p, cfg.a, height);
  rep.np = specialization_np(cfg.p, cfg.a, cfg.m, height, cfg.np);
  rep.nt = std::max<int>(rep.nt, static_cast<int>(rep.np * euler_phi_prime_power(cfg.p, cfg.m)));
  rep.wmax = cfg.wmax ? *cfg.wmax : Rational(3);

  DworkParams prm{cfg.p, cfg.a, rep.np, rep.nt, rep.wmax};
  DworkMatrix M(delta, cfg.f, prm);
  rep.basis_size = static_cast<long>(M.size());
  if (rep.basis_size < rep.kmax) throw Error(ErrorCode::kPrecisionExhausted, "basis smaller than kmax; raise wmax");
  CharSeries C = char_series(M, rep.kmax, CharMethod::kBerkowitz);
  rep.certified = C.precision;
  rep.tadic = np_c(C);

  rep.rows.push_back({"precision", true, !rep.tadic.partial,
                      rep.tadic.partial ? "some T-orders reach the certified precision" : "all T-orders proven"});
  rep.rows.push_back({"hodge_bound", true, lies_above(rep.tadic.polygon, hodge), "NP_T(C) on or above HP_C"});

  if (cfg.run_stability) {
    rep.stable = stability_check(cfg.f, delta, prm, rep.kmax);
    rep.rows.push_back({"stability", false, *rep.stable, "recomputed with wmax+1, N_T+a(p-1)"});
  }

  const bool gate = !rep.trivial_class && rep.generic();
  std::string gate_note = rep.trivial_class ? "trivial residue class: the generic polygon is the Hodge polygon"
                          : !rep.genericity ? "n/a (non-generic: " + rep.genericity_note + ")"
                          : rep.generic()   ? ""
                                            : std::string("n/a (non-generic: ") + to_string(rep.genericity->membership) + ")";

  if (rep.trivial_class) {
    rep.rows.push_back({"hodge_equality", false, rep.tadic.polygon.truncate(D) == hodge.truncate(D), gate_note});
  } else {
    bool eq = rep.tadic.polygon.truncate(std::min(rep.kmax, D)) == rep.snp_polygon->truncate(std::min(rep.kmax, D));
    rep.rows.push_back({"gnp_equality", gate, gate ? std::optional<bool>(eq) : std::nullopt,
                        gate ? "NP_T(C) on [0,D] equals the formula polygon" : gate_note});
    if (rep.kmax >= D && !rep.tadic.partial) {
      bool leq = l_polygon(rep.tadic.polygon, D) == *rep.gnp_l_slopes;
      rep.rows.push_back({"gnp_l_equality", gate, gate ? std::optional<bool>(leq) : std::nullopt,
                          gate ? "L-slopes by symmetry equal the formula multiset" : gate_note});
    }
  }

  if (cfg.run_exact_hull) {
    rep.exact_hull = gnp_brute(delta, CostSpec::exact(delta, cfg.p), cfg.p, std::min(rep.kmax, D));
    rep.rows.push_back({"exact_cost_hull", false,
                        rep.tadic.polygon.truncate(std::min(rep.kmax, D)) == *rep.exact_hull,
                        "hull of minimal exact-order assignments (reported only)"});
  }

  rep.specialized = specialize_char(C, cfg.m);
  {
    bool eq = !rep.specialized->partial && rep.specialized->polygon == rep.tadic.polygon;
    rep.rows.push_back({"character_independence", gate, eq,
                        "specialized at zeta_{p^" + std::to_string(cfg.m) + "} - 1" +
                            (gate ? std::string() : " (reported only: " + gate_note + ")")});
  }

  if (cfg.run_oracle) {
    CrossCheckParams cp;
    cp.np = std::min(rep.np, 2);
    // Traces are certified by a basis of all points with (p-1)w < N_T, so the
    // oracle precision is capped; characters needing more are skipped with a warning.
    cp.nt = std::min(rep.nt, 40);
    cp.budget = cfg.budget;
    cp.ks.clear();
    for (int k = 1; k <= 2; ++k) {
      BigInt q;
      mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(cfg.a * k));
      if ((q - 1) * (q - 1) <= cfg.budget) cp.ks.push_back(k);
    }
    if (cp.ks.empty()) throw Error(ErrorCode::kBudgetExceeded, "oracle budget too small for k = 1");
    rep.oracle = cross_check(cfg.f, delta, cfg.p, cfg.a, cp);
    rep.rows.push_back({"oracle", true, rep.oracle->pass(), "S_k from C against brute-force sums"});
  }
  return rep;
}

inline Json to_json(const VerifyReport& rep) {
  const auto& c = rep.config;
  Json config{{"d1", c.d1}, {"d2", c.d2}, {"p", c.p}, {"a", c.a}, {"m", c.m}, {"coeffs", to_json(c.f)}};
  Json precision{{"np", rep.np}, {"nt", rep.nt}, {"wmax", to_string(rep.wmax)}, {"kmax", rep.kmax},
                 {"basis_size", rep.basis_size}, {"certified", rep.certified}};
  if (rep.stable) precision["stable"] = *rep.stable;
  Json out{{"version", kVersion}, {"command", "verify"}, {"config", config}, {"precision", precision},
           {"residue_class", to_json(rep.R)}, {"trivial_class", rep.trivial_class}};
  if (rep.genericity) {
    const auto& g = *rep.genericity;
    Json gv = Json::object();
    for (const auto& [n, v] : g.g_values) gv[std::to_string(n)] = v;
    out["genericity"] = {{"verdict", to_string(g.membership)}, {"G", gv}, {"product", g.g_product}};
  } else {
    out["genericity"] = {{"verdict", "unavailable"}, {"note", rep.genericity_note}};
  }
  Json orders = Json::array();
  for (const auto& o : rep.tadic.orders) orders.push_back(to_json(o));
  out["tadic"] = to_json(rep.tadic.polygon);
  out["tadic"]["orders"] = orders;
  out["tadic"]["partial"] = rep.tadic.partial;
  if (rep.snp_polygon) out["formula"] = to_json(*rep.snp_polygon);
  if (rep.gnp_l_slopes) out["formula_l"] = to_json(*rep.gnp_l_slopes);
  if (rep.exact_hull) out["exact_cost_hull"] = to_json(*rep.exact_hull);
  if (rep.specialized) {
    Json vals = Json::array();
    for (const auto& v : rep.specialized->valuations) vals.push_back(to_json(v));
    out["specialized"] = to_json(rep.specialized->polygon);
    out["specialized"]["m"] = rep.specialized->m;
    out["specialized"]["valuations"] = vals;
    out["specialized"]["partial"] = rep.specialized->partial;
  }
  if (rep.oracle) {
    Json rows = Json::array();
    for (const auto& r : rep.oracle->rows) {
      Json row{{"k", r.k}, {"mode", r.mode}, {"pass", r.pass}};
      if (!r.pass) row["first_mismatch"] = r.first_mismatch;
      if (!r.note.empty()) row["note"] = r.note;
      rows.push_back(row);
    }
    out["oracle"] = {{"rows", rows}, {"basis_size", rep.oracle->basis_size}, {"warnings", rep.oracle->warnings}};
  }
  Json checks = Json::array();
  for (const auto& r : rep.rows) {
    Json row{{"check", r.name}, {"asserted", r.asserted}};
    row["pass"] = r.pass ? Json(*r.pass) : Json("n/a");
    row["note"] = r.note;
    checks.push_back(row);
  }
  out["checks"] = checks;
  out["pass"] = rep.asserted_pass();
  return out;
}

}  // namespace asw
