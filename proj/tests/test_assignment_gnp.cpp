#include <gtest/gtest.h>

#include <random>

#include "asw/gnp.hpp"

using namespace asw;

TEST(Assignment, HungarianMatchesExhaustiveOnRandomTables) {
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    size_t n = 1 + rng() % 7;
    CostTable c;
    c.cost.assign(n, std::vector<long>(n));
    for (auto& row : c.cost)
      for (auto& x : row) x = (rng() % 5 == 0) ? CostTable::kForbidden : static_cast<long>(rng() % 20);
    AssignmentResult e, h;
    bool ef = false, hf = false;
    try {
      e = min_assignment_exhaustive(c);
    } catch (const Error&) {
      ef = true;
    }
    try {
      h = min_assignment_hungarian(c);
    } catch (const Error&) {
      hf = true;
    }
    ASSERT_EQ(ef, hf);
    if (!ef) {
      EXPECT_EQ(e.value, h.value);
    }
  }
}

TEST(Gnp, ClassOfPrime) {
  RectDelta d(3, 4);
  EXPECT_EQ(ResidueClass::of_prime(d, 5), (ResidueClass{2, 1}));
  EXPECT_EQ(nontrivial_classes(RectDelta(3, 3)).size(), 8u);
  EXPECT_TRUE(ResidueClass::of_prime(RectDelta(3, 3), 7).is_trivial());
}

TEST(Gnp, FormulaSquareClassTwoTwo) {
  RectDelta d(3, 3);
  auto F = gnp_formula(d, CostSpec::formula({2, 2}));
  EXPECT_EQ(F.term(0).M, Rational(0));
  EXPECT_EQ(F.term(3).M, Rational(2));
  EXPECT_EQ(F.term(6).M, make_rational(11, 3));
  EXPECT_EQ(F.term(3).eps, make_rational(2, 3));
  EXPECT_EQ(F.term(6).eps, make_rational(1, 3));
}

TEST(Gnp, SolversAgreeOnAllClasses) {
  for (auto d : {RectDelta(3, 3), RectDelta(3, 4)})
    for (const auto& R : nontrivial_classes(d))
      for (long n : i_set(d)) {
        auto C = cost_matrix(d, R, filtration(d, n));
        EXPECT_EQ(min_assignment(C, Solver::kExhaustive).value, min_assignment(C, Solver::kHungarian).value);
      }
}

TEST(Gnp, SnpSquareAtFive) {
  RectDelta d(3, 3);
  auto P = snp(d, ResidueClass::of_prime(d, 5), 5);
  std::vector<PolygonVertex> expected{{0, Rational(0)}, {1, Rational(0)}, {4, make_rational(3, 2)}, {9, make_rational(21, 4)}};
  EXPECT_EQ(P.vertices(), expected);
  EXPECT_THROW(snp(d, ResidueClass{2, 2}, 7), Error);
}

TEST(Gnp, ExactCostHullSquare) {
  RectDelta d(3, 3);
  auto H5 = gnp_brute(d, CostSpec::exact(d, 5), 5, 9);
  std::vector<PolygonVertex> e5{{0, Rational(0)}, {1, Rational(0)}, {7, Rational(3)}, {9, make_rational(9, 2)}};
  EXPECT_EQ(H5.vertices(), e5);
  auto H11 = gnp_brute(d, CostSpec::exact(d, 11), 11, 9);
  std::vector<PolygonVertex> e11{
      {0, Rational(0)}, {1, Rational(0)}, {4, make_rational(6, 5)}, {7, Rational(3)}, {9, make_rational(22, 5)}};
  EXPECT_EQ(H11.vertices(), e11);
}

TEST(Gnp, LSideLengthAndProgression) {
  for (auto d : {RectDelta(3, 3), RectDelta(3, 4)})
    for (long p : {5L, 7L, 11L}) {
      auto R = ResidueClass::of_prime(d, p);
      auto F = R.is_trivial() ? hodge_formula(d) : gnp_formula(d, CostSpec::formula(R));
      auto L = gnp_l(F, p);
      EXPECT_EQ(L.total(), 2 * d.D());
      for (int m = 1; m <= 3; ++m) EXPECT_EQ(weighted_progression(L, p, m), gnp_l_m(F, p, m));
    }
}

TEST(Gnp, HodgeFormulaAgreesWithHodgePolygonOnFirstD) {
  RectDelta d(3, 3);
  auto L = NewtonPolygon::from_slopes(gnp_l(hodge_formula(d), 7));
  EXPECT_EQ(L.truncate(9), hodge_l(d).truncate(9));
  // The second half is the mirror image s -> 2 - s, unlike H(k).
  EXPECT_EQ(L.value_at(18), Rational(18));
}

TEST(Gnp, EigencurveBucketsSquareAtFive) {
  RectDelta d(3, 3);
  auto F = gnp_formula(d, CostSpec::formula(ResidueClass::of_prime(d, 5)));
  auto C = gnp_c(F, 5, Rational(5));
  auto rep = eigencurve_components(C, Rational(5), F, 5, 5);
  std::vector<long> expected{10, 28, 46, 64, 82};
  ASSERT_EQ(rep.buckets.size(), expected.size());
  long total = rep.slope_zero;
  for (size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(rep.buckets[i].computed, expected[i]);
    total += rep.buckets[i].computed;
  }
  EXPECT_EQ(total, C.total());
}
