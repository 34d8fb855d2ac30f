#pragma once

// JSON serialization of polygons, slope multisets, polynomials and formula
// tables, and parsing of the coefficient-map input format. Rationals are
// written as "num/den" strings (integers without a denominator).

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "asw/dwork.hpp"
#include "asw/error.hpp"
#include "asw/gnp.hpp"
#include "asw/polygon.hpp"
#include "asw/rational.hpp"
#include "asw/symbolic.hpp"

namespace asw {

using Json = nlohmann::ordered_json;

inline Json to_json(const SlopeMultiset& s) {
  Json out = Json::array();
  for (const auto& [slope, m] : s) out.push_back({{"s", to_string(slope)}, {"m", m}});
  return out;
}

inline Json to_json(const NewtonPolygon& P) {
  Json vertices = Json::array();
  for (const auto& v : P.vertices()) vertices.push_back({std::to_string(v.x), to_string(v.y)});
  return {{"vertices", vertices}, {"slopes", to_json(P.slopes())}};
}

inline Json to_json(const MPoly& poly) {
  Json out = Json::array();
  for (const auto& [m, c] : poly.terms()) {
    Json mono = Json::object();
    for (const auto& [k, e] : poly.describe(m)) mono[k] = e;
    out.push_back({{"monomial", mono}, {"coeff", to_string(c)}});
  }
  return out;
}

inline Json to_json(const SeriesOrder& o) {
  return o.exact ? Json(o.value) : Json(">=" + std::to_string(o.value));
}

inline Json to_json(const ResidueClass& R) { return Json::array({R.r1, R.r2}); }

inline Json to_json(const CoeffMap& f) {
  Json out = Json::object();
  for (const auto& [v, c] : f) out[to_string(v)] = c;
  return out;
}

// Formula table for one (Delta, R): {n, k_n, W, M, eps, beta(p)} per n in I_D.
inline Json formula_table(const GnpFormula& F, const std::vector<long>& primes) {
  Json rows = Json::array();
  for (const auto& t : F.terms) {
    Json row{{"n", t.n}, {"k_n", t.k_n}, {"W", t.W}, {"M", to_string(t.M)}, {"eps", to_string(t.eps)}};
    Json betas = Json::object();
    for (long p : primes) betas[std::to_string(p)] = to_string(t.beta(p, F.delta.D()));
    row["beta"] = betas;
    rows.push_back(row);
  }
  return rows;
}

// Input of f: {"p":5, "a":1, "d1":3, "d2":3, "coeffs": {"1,0": 2, ...}}; every
// field except coeffs is optional.
struct PolynomialInput {
  std::optional<long> p;
  std::optional<int> a;
  std::optional<long> d1, d2;
  CoeffMap coeffs;
};

inline PolynomialInput parse_polynomial(const Json& j) {
  PolynomialInput out;
  try {
    if (j.contains("p")) out.p = j.at("p").get<long>();
    if (j.contains("a")) out.a = j.at("a").get<int>();
    if (j.contains("d1")) out.d1 = j.at("d1").get<long>();
    if (j.contains("d2")) out.d2 = j.at("d2").get<long>();
    if (!j.contains("coeffs") || !j.at("coeffs").is_object()) throw Error(ErrorCode::kBadInput, "missing \"coeffs\" object");
    for (const auto& [key, value] : j.at("coeffs").items()) out.coeffs[parse_point(key)] = value.get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadInput, std::string("malformed polynomial: ") + e.what());
  }
  return out;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kBadInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadInput, path + ": " + e.what());
  }
}

}  // namespace asw
