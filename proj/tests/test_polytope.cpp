#include <gtest/gtest.h>

#include "asw/polytope.hpp"

using namespace asw;

TEST(Polytope, WeightCountsSquare) {
  RectDelta d(3, 3);
  std::vector<long> expected{1, 0, 0, 3, 0, 0, 5, 0, 0, 7};
  for (long k = 0; k <= 9; ++k) EXPECT_EQ(w_count(d, k), expected[static_cast<size_t>(k)]) << "k=" << k;
}

TEST(Polytope, WeightCountsRectangle) {
  RectDelta d(3, 4);
  std::vector<long> expected{1, 0, 0, 1, 2, 0, 2, 0, 3, 3, 0, 0, 8};
  for (long k = 0; k <= 12; ++k) EXPECT_EQ(w_count(d, k), expected[static_cast<size_t>(k)]) << "k=" << k;
}

TEST(Polytope, HodgeNumbersSumToTwoD) {
  for (auto d : {RectDelta(3, 3), RectDelta(3, 4), RectDelta(4, 5)}) {
    long sum = 0;
    for (long k = 0; k <= 2 * d.D(); ++k) {
      EXPECT_GE(h_count(d, k), 0);
      sum += h_count(d, k);
    }
    EXPECT_EQ(sum, 2 * d.D());
  }
}

TEST(Polytope, ISetAndFiltration) {
  RectDelta sq(3, 3);
  EXPECT_EQ(i_set(sq), (std::vector<long>{0, 3, 6}));
  EXPECT_EQ(k_n(sq, 0), 1);
  EXPECT_EQ(k_n(sq, 3), 4);
  EXPECT_EQ(k_n(sq, 6), 9);
  RectDelta r(3, 4);
  EXPECT_EQ(i_set(r), (std::vector<long>{0, 3, 4, 6, 8, 9}));
  std::vector<long> kn{1, 2, 4, 6, 9, 12};
  auto I = i_set(r);
  for (size_t t = 0; t < I.size(); ++t) {
    EXPECT_EQ(k_n(r, I[t]), kn[t]);
    EXPECT_EQ(static_cast<long>(filtration(r, I[t]).size()), kn[t]);
  }
  EXPECT_EQ(i_set_predecessor(r, 6), 4);
  EXPECT_FALSE(in_i_set(r, 5));
}

TEST(Polytope, WeightIsMaxOfScaledCoordinates) {
  RectDelta d(3, 4);
  EXPECT_EQ(weight(d, {2, 1}), make_rational(2, 3));
  EXPECT_EQ(weight(d, {1, 3}), make_rational(3, 4));
  EXPECT_EQ(weight_key(d, {3, 4}), 12);
  EXPECT_TRUE(d.is_vertex({3, 0}));
  EXPECT_FALSE(d.is_vertex({1, 0}));
}

TEST(Polytope, PointsUpToWeight) {
  RectDelta d(3, 3);
  EXPECT_EQ(points_up_to_weight(d, Rational(1)).size(), 16u);
  EXPECT_EQ(points_up_to_weight(d, Rational(2)).size(), 49u);
}

TEST(Polytope, RejectsBadSides) { EXPECT_THROW(RectDelta(0, 3), Error); }
