#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "asw/dwork.hpp"
#include "asw/gnp.hpp"

using namespace asw;

namespace {

CoeffMap sample_f() {
  return {{{0, 0}, 2}, {{0, 1}, 3}, {{0, 2}, 3}, {{0, 3}, 1}, {{1, 0}, 2}, {{1, 1}, 2}, {{1, 2}, 2}, {{1, 3}, 1},
          {{2, 0}, 1}, {{2, 1}, 4}, {{2, 2}, 4}, {{2, 3}, 2}, {{3, 0}, 1}, {{3, 1}, 1}, {{3, 2}, 3}, {{3, 3}, 3}};
}

bool agree_below(const SeriesRing<ZmodPN>& S, const Series& a, const Series& b, long prec) {
  return S.equal(S.truncate(a, static_cast<int>(prec)), S.truncate(b, static_cast<int>(prec)));
}

}  // namespace

TEST(Dwork, TeichmullerLiftIsARootOfUnity) {
  ZmodPN R(5, 3);
  auto t = teichmuller_int(R, 2);
  EXPECT_EQ(R.pow(t, 4), R.one());
  EXPECT_EQ(t % 5, 2u);
}

TEST(Dwork, SplittingFunctionOfAMonomial) {
  // For f = x1 the coefficient of x1^j is u_j pi^j with u the Artin-Hasse coefficients.
  RectDelta d(3, 3);
  ZmodPN R(5, 2);
  SplittingFunction E(d, {{{1, 0}, 1}}, R, 10, 6, 0);
  const auto& S = E.series_ring();
  auto u = artin_hasse_coeffs(5, 10);
  auto pij = S.one();
  for (int j = 0; j < 6; ++j) {
    EXPECT_TRUE(S.equal(E.coefficient({j, 0}), S.scale(pij, R.from_rational(u[static_cast<size_t>(j)])))) << j;
    pij = S.mul(pij, E.pi());
  }
  EXPECT_TRUE(S.is_zero(E.coefficient({1, 1})));
}

TEST(Dwork, BerkowitzAgreesWithTraceRoute) {
  RectDelta d(3, 3);
  DworkMatrix M(d, sample_f(), {5, 1, 2, 30, Rational(1)});
  auto B = char_series(M, 3, CharMethod::kBerkowitz);
  auto T = char_series(M, 3, CharMethod::kTraces);
  const auto& S = M.series_ring();
  for (long k = 0; k <= 3; ++k) EXPECT_TRUE(S.equal(B.H[static_cast<size_t>(k)], T.H[static_cast<size_t>(k)])) << k;
  auto L = char_series(M, 2, CharMethod::kAuto);
  EXPECT_EQ(L.method, CharMethod::kTraces);
  for (long k = 0; k <= 2; ++k)
    EXPECT_TRUE(agree_below(S, L.H[static_cast<size_t>(k)], B.H[static_cast<size_t>(k)], L.precision[static_cast<size_t>(k)]));
}

TEST(Dwork, CharacteristicSeriesIsBasisOrderInvariant) {
  RectDelta d(3, 3);
  DworkMatrix M(d, sample_f(), {5, 1, 2, 24, Rational(1)});
  auto A = M.materialize();
  const size_t n = A.size();
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
  auto P = A;
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) P[r][c] = A[perm[r]][perm[c]];
  const auto& S = M.series_ring();
  auto h1 = berkowitz(S, A, 5), h2 = berkowitz(S, P, 5);
  for (size_t k = 0; k <= 5; ++k) EXPECT_TRUE(S.equal(h1[k], h2[k])) << k;
}

TEST(Dwork, PowerSumsRoundTrip) {
  RectDelta d(3, 3);
  DworkMatrix M(d, sample_f(), {5, 1, 2, 24, Rational(1)});
  const auto& S = M.series_ring();
  auto C = char_series(M, 4, CharMethod::kBerkowitz);
  auto ps = power_sums_from_h(S, C.H, 4);
  auto H = char_from_power_sums(S, ps, 4);
  for (size_t k = 0; k <= 4; ++k) EXPECT_TRUE(S.equal(H[k], C.H[k])) << k;
  std::vector<Series> bad(6, S.zero());
  EXPECT_THROW(char_from_power_sums(S, bad, 5), Error);
}

TEST(Dwork, GenericPolygonOfSampleAtFive) {
  RectDelta d(3, 3);
  DworkMatrix M(d, sample_f(), {5, 1, 6, 40, Rational(2)});
  auto C = char_series(M, 9, CharMethod::kBerkowitz);
  auto np = np_c(C);
  EXPECT_FALSE(np.partial);
  std::vector<PolygonVertex> expected{{0, Rational(0)}, {1, Rational(0)}, {7, Rational(3)}, {9, make_rational(9, 2)}};
  EXPECT_EQ(np.polygon.vertices(), expected);
  EXPECT_EQ(np.polygon, gnp_brute(d, CostSpec::exact(d, 5), 5, 9));
  EXPECT_TRUE(lies_above(np.polygon, hodge_c(d, Rational(2)).truncate(9)));
  // The specialization at the character of order p agrees except at k = 9,
  // where the leading T-coefficient is divisible by p.
  auto s1 = specialize_char(C, 1);
  EXPECT_FALSE(s1.partial);
  EXPECT_EQ(s1.polygon.truncate(7), np.polygon.truncate(7));
}

TEST(Dwork, LinearPolynomialHasTrivialPolygon) {
  RectDelta d(3, 3);
  DworkMatrix M(d, {{{1, 0}, 1}, {{0, 1}, 1}}, {5, 1, 2, 20, Rational(1)});
  auto C = char_series(M, 2, CharMethod::kBerkowitz);
  // H_1 of x1 + x2 is -(a(0,0)) = -1 up to precision: one unit root.
  auto np = np_c(C);
  EXPECT_EQ(np.polygon.value_at(1), Rational(0));
}

TEST(Dwork, LPolygonDoublesBySymmetry) {
  SlopeMultiset s;
  s.add(Rational(0), 1);
  s.add(make_rational(1, 2), 2);
  auto L = l_polygon(NewtonPolygon::from_slopes(s), 3);
  EXPECT_EQ(L.total(), 6);
  EXPECT_EQ(L.multiplicity(Rational(2)), 1);
  EXPECT_EQ(L.multiplicity(make_rational(3, 2)), 2);
  EXPECT_THROW(l_polygon(NewtonPolygon::from_slopes(s), 4), Error);
}

TEST(Dwork, ReducePrecisionCannotRaise) {
  RectDelta d(3, 3);
  DworkMatrix M(d, sample_f(), {5, 1, 2, 12, Rational(1)});
  auto C = char_series(M, 2);
  EXPECT_THROW(reduce_precision(C, 3), Error);
  EXPECT_EQ(reduce_precision(C, 1).params.np, 1);
}

TEST(Dwork, RejectsExponentOutsideRectangle) {
  RectDelta d(3, 3);
  EXPECT_THROW(DworkMatrix(d, {{{4, 0}, 1}}, {5, 1, 2, 12, Rational(1)}), Error);
}
