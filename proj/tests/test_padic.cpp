#include <gtest/gtest.h>

#include "asw/padic.hpp"

using namespace asw;

TEST(Padic, ZmodArithmetic) {
  ZmodPN R(5, 3);
  EXPECT_EQ(R.modulus(), 125u);
  auto x = R.from_int(-1);
  EXPECT_EQ(R.mul(x, x), R.one());
  EXPECT_EQ(R.mul(R.inv(R.from_int(7)), R.from_int(7)), R.one());
  EXPECT_EQ(R.valuation(R.from_int(50)), 2);
  EXPECT_THROW(R.inv(R.from_int(10)), Error);
  EXPECT_THROW(ZmodPN(6, 2), Error);
}

TEST(Padic, ArtinHasseCoefficientsArePIntegral) {
  auto c = artin_hasse_coeffs(5, 30);
  EXPECT_EQ(c[0], 1);
  EXPECT_EQ(c[1], 1);
  EXPECT_EQ(c[2], make_rational(1, 2));
  for (const auto& x : c) EXPECT_NE(BigInt(x.get_den()) % 5, 0);
}

TEST(Padic, InverseArtinHasseSolvesEOfPiEqualsOnePlusT) {
  ZmodPN R(5, 3);
  SeriesRing<ZmodPN> S(R, 25);
  auto pi = invert_artin_hasse(S);
  std::vector<ZmodPN::Elem> e;
  for (const auto& x : artin_hasse_coeffs(5, 25)) e.push_back(R.from_rational(x));
  auto lhs = S.compose(e, pi);
  auto rhs = S.add(S.one(), S.monomial(R.one(), 1));
  EXPECT_TRUE(S.equal(lhs, rhs));
  EXPECT_EQ(S.order(pi).value, 1);
}

TEST(Padic, SeriesInverse) {
  ZmodPN R(7, 2);
  SeriesRing<ZmodPN> S(R, 12);
  auto a = S.add(S.one(), S.monomial(R.from_int(3), 2));
  EXPECT_TRUE(S.equal(S.mul(a, S.inv(a)), S.one()));
}

TEST(Padic, GaloisRingFrobeniusAndTeichmuller) {
  GaloisRing G(3, 2, 2);
  auto g = G.generator();
  auto fr = G.frobenius(G.frobenius(g));
  EXPECT_TRUE(G.is_zero(G.sub(fr, g)));
  auto t = G.teichmuller(g);
  EXPECT_TRUE(G.is_zero(G.sub(G.pow(t, G.residue_field_size() - 1), G.one())));
  EXPECT_EQ(G.trace(G.one()), 2u);
}

TEST(Padic, CyclotomicSumOfRootsVanishes) {
  CycInt s = CycInt::integer(5, 1, 0);
  for (long t = 0; t < 5; ++t) s = s + CycInt::zeta_power(5, 1, t);
  EXPECT_TRUE(s.is_zero());
  EXPECT_EQ(pi_valuation(CycInt::integer(5, 1, 5)).value, 4);
  EXPECT_EQ(pi_valuation(CycInt::zeta_power(5, 1, 1) - CycInt::integer(5, 1, 1)).value, 1);
}

TEST(Padic, PrimitivePolynomialDegree) {
  auto g = primitive_polynomial(5, 3);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.back(), 1);
}
