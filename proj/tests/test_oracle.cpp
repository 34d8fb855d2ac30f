#include <gtest/gtest.h>

#include "asw/oracle.hpp"

using namespace asw;

namespace {

CoeffMap sample_f() {
  return {{{0, 0}, 2}, {{0, 1}, 3}, {{0, 2}, 3}, {{0, 3}, 1}, {{1, 0}, 2}, {{1, 1}, 2}, {{1, 2}, 2}, {{1, 3}, 1},
          {{2, 0}, 1}, {{2, 1}, 4}, {{2, 2}, 4}, {{2, 3}, 2}, {{3, 0}, 1}, {{3, 1}, 1}, {{3, 2}, 3}, {{3, 3}, 3}};
}

}  // namespace

TEST(Oracle, LinearSumOverTorusIsOne) {
  // sum over (F_p^*)^2 of zeta^{x1 + x2} = (-1)^2.
  CoeffMap lin{{{1, 0}, 1}, {{0, 1}, 1}};
  SumRequest req;
  EXPECT_EQ(exp_sum_chi(lin, req, 1), CycInt::integer(5, 1, 1));
  req.k = 2;
  EXPECT_EQ(exp_sum_chi(lin, req, 1), CycInt::integer(5, 1, 1));
}

TEST(Oracle, HistogramCountsAllPoints) {
  SumRequest req;
  req.k = 2;
  auto h = trace_histogram(sample_f(), req, 1);
  BigInt total = 0;
  for (const auto& x : h) total += x;
  EXPECT_EQ(total, 24 * 24);
}

TEST(Oracle, BudgetIsEnforced) {
  SumRequest req;
  req.k = 3;
  req.budget = 1000;
  EXPECT_THROW(trace_histogram(sample_f(), req, 1), Error);
}

TEST(Oracle, CrossCheckAgreesOnSample) {
  RectDelta d(3, 3);
  CrossCheckParams cp;
  cp.nt = 30;
  auto rep = cross_check(sample_f(), d, 5, 1, cp);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.rows.size(), 6u);
}

TEST(Oracle, CrossCheckDetectsInjectedFault) {
  RectDelta d(3, 3);
  CrossCheckParams cp;
  cp.nt = 30;
  cp.ms = {};
  auto ds = dwork_sums(sample_f(), d, 5, 1, 2, cp.np, cp.nt);
  ZmodPN R(5, cp.np);
  SeriesRing<ZmodPN> S(R, cp.nt);
  auto bad = ds.S;
  bad[1] = S.add(bad[1], S.monomial(R.one(), 7));
  auto rep = cross_check(sample_f(), d, 5, 1, cp, bad);
  EXPECT_FALSE(rep.pass());
  ASSERT_FALSE(rep.rows.empty());
  EXPECT_EQ(rep.rows[0].first_mismatch, 7);
  auto ok = cross_check(sample_f(), d, 5, 1, cp, ds.S);
  EXPECT_TRUE(ok.pass());
}

TEST(Oracle, EmptyRangeWarns) {
  CrossCheckParams cp;
  cp.ks = {};
  auto rep = cross_check(sample_f(), RectDelta(3, 3), 5, 1, cp);
  EXPECT_TRUE(rep.rows.empty());
  EXPECT_FALSE(rep.warnings.empty());
}
