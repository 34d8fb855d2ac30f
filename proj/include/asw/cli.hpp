#pragma once

// Command implementations behind the asw executable. Each command takes a
// validated JobConfig and returns a JSON report plus the process exit code:
// 0 success, 1 an asserted check failed, 2 configuration error, 3 precision
// exhausted, 4 budget exceeded.

#include <optional>
#include <string>
#include <vector>

#include "asw/dwork.hpp"
#include "asw/error.hpp"
#include "asw/gnp.hpp"
#include "asw/oracle.hpp"
#include "asw/pipeline.hpp"
#include "asw/polygon.hpp"
#include "asw/report.hpp"
#include "asw/symbolic.hpp"
#include "asw/version.hpp"

namespace asw {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitPrecision = 3, kExitBudget = 4 };

struct JobConfig {
  std::string command;
  long d1 = 3, d2 = 3;
  std::optional<long> p;
  std::optional<ResidueClass> residue;  // alternative to p for formula tables
  std::vector<long> primes;             // extra primes for beta columns
  int a = 1;
  int m = 1;
  std::optional<CoeffMap> f;
  int np = 2;
  int nt = 0;
  std::optional<Rational> wmax;
  long kmax = 0;
  long budget = 1'000'000;
  long imax = 3;
  Rational bound = 1;                   // slope bound for C-side multisets
  std::string model = "formula";          // cost model: formula | exact
  std::vector<int> ks{1, 2};            // crosscheck extension degrees
};

struct CommandResult {
  Json report;
  int exit_code = kExitOk;
};

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kPrecisionExhausted: return kExitPrecision;
    case ErrorCode::kBudgetExceeded: return kExitBudget;
    default: return kExitConfig;
  }
}

// Keys of a JSON config file override the corresponding flags.
inline void apply_config(JobConfig& cfg, const Json& j) {
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") cfg.command = v.get<std::string>();
      else if (key == "d1") cfg.d1 = v.get<long>();
      else if (key == "d2") cfg.d2 = v.get<long>();
      else if (key == "p") cfg.p = v.get<long>();
      else if (key == "class") cfg.residue = ResidueClass{v.at(0).get<long>(), v.at(1).get<long>()};
      else if (key == "primes") cfg.primes = v.get<std::vector<long>>();
      else if (key == "a") cfg.a = v.get<int>();
      else if (key == "m") cfg.m = v.get<int>();
      else if (key == "np") cfg.np = v.get<int>();
      else if (key == "nt") cfg.nt = v.get<int>();
      else if (key == "wmax") cfg.wmax = parse_rational(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>()));
      else if (key == "kmax") cfg.kmax = v.get<long>();
      else if (key == "budget") cfg.budget = v.get<long>();
      else if (key == "imax") cfg.imax = v.get<long>();
      else if (key == "bound") cfg.bound = parse_rational(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>()));
      else if (key == "model") cfg.model = v.get<std::string>();
      else if (key == "k") cfg.ks = v.get<std::vector<int>>();
      else if (key == "f") {
        auto in = parse_polynomial(v.is_string() ? read_json_file(v.get<std::string>()) : v);
        cfg.f = in.coeffs;
      } else {
        throw Error(ErrorCode::kBadInput, "unknown config key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadInput, std::string("config: ") + e.what());
  }
}

inline void validate(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  auto need_p = [&] {
    if (!cfg.p) throw Error(ErrorCode::kBadInput, cfg.command + " needs --p");
    if (!is_prime(*cfg.p) || delta.D() % *cfg.p == 0) throw Error(ErrorCode::kBadInput, "p must be a prime not dividing d1*d2");
  };
  if (cfg.a < 1 || cfg.m < 1) throw Error(ErrorCode::kBadInput, "a and m must be >= 1");
  if (cfg.np < 1 || cfg.nt < 0 || cfg.kmax < 0 || cfg.budget < 1 || cfg.imax < 1)
    throw Error(ErrorCode::kBadInput, "precisions and budgets must be positive");
  if (cfg.model != "formula" && cfg.model != "exact") throw Error(ErrorCode::kBadInput, "model must be formula or exact");
  for (long q : cfg.primes)
    if (!is_prime(q)) throw Error(ErrorCode::kBadInput, "not a prime: " + std::to_string(q));
  const std::string& c = cfg.command;
  if (c == "gnp" || c == "eigencurve" || c == "zeta" || c == "genericity" || c == "verify" || c == "crosscheck") need_p();
  if ((c == "genericity" || c == "verify" || c == "crosscheck") && !cfg.f) throw Error(ErrorCode::kBadInput, c + " needs --f");
  if (cfg.f)
    for (const auto& [v, x] : *cfg.f)
      if (!delta.contains(v)) throw Error(ErrorCode::kBadInput, "exponent outside the rectangle: " + to_string(v));
}

inline Json config_json(const JobConfig& cfg) {
  Json j{{"d1", cfg.d1}, {"d2", cfg.d2}, {"a", cfg.a}, {"m", cfg.m}, {"np", cfg.np}, {"nt", cfg.nt},
         {"kmax", cfg.kmax}, {"budget", cfg.budget}, {"imax", cfg.imax}, {"bound", to_string(cfg.bound)},
         {"model", cfg.model}};
  if (cfg.p) j["p"] = *cfg.p;
  if (cfg.residue) j["class"] = to_json(*cfg.residue);
  if (!cfg.primes.empty()) j["primes"] = cfg.primes;
  if (cfg.wmax) j["wmax"] = to_string(*cfg.wmax);
  if (cfg.f) j["coeffs"] = to_json(*cfg.f);
  return j;
}

inline Json envelope(const JobConfig& cfg) {
  return {{"version", kVersion}, {"command", cfg.command}, {"config", config_json(cfg)}};
}

inline CostSpec cost_spec(const JobConfig& cfg, const RectDelta& delta, const ResidueClass& R) {
  if (cfg.model == "exact") {
    if (!cfg.p) throw Error(ErrorCode::kBadInput, "the exact cost model needs --p");
    return CostSpec::exact(delta, *cfg.p);
  }
  return CostSpec::formula(R);
}

inline CommandResult cmd_hodge(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  Json out = envelope(cfg);
  out["hodge_l"] = to_json(hodge_l(delta));
  out["hodge_c"] = to_json(hodge_c(delta, cfg.bound));
  Json counts = Json::array();
  for (long k = 0; k <= 2 * delta.D(); ++k) counts.push_back({{"k", k}, {"W", w_count(delta, k)}, {"H", h_count(delta, k)}});
  out["counts"] = counts;
  out["I_D"] = i_set(delta);
  return {out, kExitOk};
}

inline CommandResult cmd_gnp(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  const long p = *cfg.p;
  ResidueClass R = ResidueClass::of_prime(delta, p);
  Json out = envelope(cfg);
  out["residue_class"] = to_json(R);
  if (R.is_trivial()) {
    out["note"] = "trivial residue class: the generic Newton polygon is the Hodge polygon";
    out["gnp_l"] = to_json(hodge_l(delta).slopes());
    return {out, kExitOk};
  }
  GnpFormula F = gnp_formula(delta, cost_spec(cfg, delta, R));
  std::vector<long> primes{p};
  for (long q : cfg.primes)
    if (q != p) primes.push_back(q);
  out["model"] = cfg.model;
  out["table"] = formula_table(F, primes);
  out["snp"] = to_json(snp(F, p));
  out["gnp_l"] = to_json(cfg.m == 1 ? gnp_l(F, p) : gnp_l_m(F, p, cfg.m));
  out["gnp_c"] = to_json(gnp_c_m(F, p, cfg.m, cfg.bound));
  Json gaps = Json::array();
  for (const auto& g : gap_to_hodge(F, p))
    gaps.push_back({{"n", g.n}, {"k_n", g.k_n}, {"gap", to_string(g.cumulative)}, {"segment", to_string(g.per_segment)}});
  out["gap_to_hodge"] = gaps;
  return {out, kExitOk};
}

inline CommandResult cmd_table(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  Json out = envelope(cfg);
  std::vector<ResidueClass> classes;
  if (cfg.residue) classes.push_back(*cfg.residue);
  else if (cfg.p) classes.push_back(ResidueClass::of_prime(delta, *cfg.p));
  else classes = nontrivial_classes(delta);
  std::vector<long> primes = cfg.primes;
  if (cfg.p && std::find(primes.begin(), primes.end(), *cfg.p) == primes.end()) primes.insert(primes.begin(), *cfg.p);
  Json tables = Json::array();
  for (const auto& R : classes) {
    if (R.is_trivial()) continue;
    GnpFormula F = gnp_formula(delta, cost_spec(cfg, delta, R));
    std::vector<long> in_class;
    for (long q : primes)
      if (R.contains(delta, q)) in_class.push_back(q);
    tables.push_back({{"class", to_json(R)}, {"rows", formula_table(F, in_class)}});
  }
  out["tables"] = tables;
  return {out, kExitOk};
}

inline CommandResult cmd_eigencurve(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  const long p = *cfg.p;
  ResidueClass R = ResidueClass::of_prime(delta, p);
  if (R.is_trivial()) throw Error(ErrorCode::kBadInput, "eigencurve needs a nontrivial residue class");
  GnpFormula F = gnp_formula(delta, cost_spec(cfg, delta, R));
  auto C = gnp_c(F, p, Rational(cfg.imax));
  auto rep = eigencurve_components(C, Rational(cfg.imax), F, p, cfg.imax);
  Json out = envelope(cfg);
  out["slope_zero_degree"] = rep.slope_zero;
  out["delta"] = rep.delta;
  Json rows = Json::array();
  long total = rep.slope_zero;
  for (const auto& b : rep.buckets) {
    total += b.computed;
    rows.push_back({{"bucket", "(" + std::to_string(b.i - 1) + "," + std::to_string(b.i) + "]"},
                    {"computed", b.computed},
                    {"claimed", b.claimed},
                    {"match", b.match}});
  }
  out["buckets"] = rows;
  out["conserved"] = total == rep.total_below;
  return {out, total == rep.total_below ? kExitOk : kExitCheckFailed};
}

inline CommandResult cmd_zeta(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  const long p = *cfg.p;
  ResidueClass R = ResidueClass::of_prime(delta, p);
  Json out = envelope(cfg);
  if (R.is_trivial()) throw Error(ErrorCode::kBadInput, "zeta needs a nontrivial residue class");
  GnpFormula F = gnp_formula(delta, cost_spec(cfg, delta, R));
  auto Z = zeta_polygon(F, p, cfg.m);
  out["zeta"] = to_json(Z);
  out["length"] = Z.total();
  Json per_m = Json::array();
  for (int k = 1; k <= cfg.m; ++k) per_m.push_back({{"m", k}, {"slopes", to_json(gnp_l_m(F, p, k))}});
  out["characters"] = per_m;
  return {out, kExitOk};
}

inline CommandResult cmd_genericity(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  GenericityModel model(delta, *cfg.p);
  Json out = envelope(cfg);
  try {
    auto v = model.test(*cfg.f);
    out["verdict"] = to_string(v.membership);
    out["residue_class"] = to_json(v.R);
    out["trivial_class"] = v.trivial_class;
    Json rows = Json::array();
    for (const auto& [n, val] : v.g_values)
      rows.push_back({{"n", n}, {"level", v.levels.at(n)}, {"G_mod_p", val}, {"terms", model.polys().at(n).size()}});
    out["G"] = rows;
    out["normalized"] = to_json(v.normalized);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBadReduction) throw;
    out["verdict"] = "OUTSIDE";
    out["note"] = e.what();
  }
  return {out, kExitOk};
}

inline CommandResult cmd_verify(const JobConfig& cfg) {
  VerifyConfig v;
  v.d1 = cfg.d1;
  v.d2 = cfg.d2;
  v.p = *cfg.p;
  v.a = cfg.a;
  v.m = cfg.m;
  v.f = *cfg.f;
  v.np = cfg.np;
  v.nt = cfg.nt;
  v.wmax = cfg.wmax;
  v.kmax = cfg.kmax;
  v.budget = cfg.budget;
  auto rep = verify(v);
  Json out = to_json(rep);
  out["config"] = config_json(cfg);
  int code = kExitOk;
  for (const auto& r : rep.rows)
    if (r.asserted && r.pass && !*r.pass) code = r.name == "precision" ? kExitPrecision : kExitCheckFailed;
  return {out, code};
}

inline CommandResult cmd_crosscheck(const JobConfig& cfg) {
  RectDelta delta(cfg.d1, cfg.d2);
  CrossCheckParams cp;
  cp.np = cfg.np;
  cp.nt = cfg.nt > 0 ? cfg.nt : 40;
  cp.ks = cfg.ks;
  cp.ms = {cfg.m};
  cp.budget = cfg.budget;
  auto rep = cross_check(*cfg.f, delta, *cfg.p, cfg.a, cp);
  Json out = envelope(cfg);
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    Json row{{"k", r.k}, {"mode", r.mode}, {"pass", r.pass}};
    if (!r.pass) row["first_mismatch"] = r.first_mismatch;
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  out["rows"] = rows;
  out["warnings"] = rep.warnings;
  out["basis_size"] = rep.basis_size;
  out["pass"] = rep.pass();
  return {out, rep.pass() ? kExitOk : kExitCheckFailed};
}

inline CommandResult run_command(const JobConfig& cfg) {
  try {
    validate(cfg);
    const std::string& c = cfg.command;
    if (c == "hodge") return cmd_hodge(cfg);
    if (c == "gnp") return cmd_gnp(cfg);
    if (c == "table") return cmd_table(cfg);
    if (c == "eigencurve") return cmd_eigencurve(cfg);
    if (c == "zeta") return cmd_zeta(cfg);
    if (c == "genericity") return cmd_genericity(cfg);
    if (c == "verify") return cmd_verify(cfg);
    if (c == "crosscheck") return cmd_crosscheck(cfg);
    throw Error(ErrorCode::kBadInput, "unknown command \"" + c + "\"");
  } catch (const Error& e) {
    Json out = {{"version", kVersion}, {"command", cfg.command}, {"error", e.what()}};
    return {out, exit_code_for(e)};
  }
}

}  // namespace asw
