#include <gtest/gtest.h>

#include "asw/cli.hpp"

using namespace asw;

TEST(Cli, HodgeReport) {
  JobConfig cfg;
  cfg.command = "hodge";
  auto r = run_command(cfg);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.report["version"], kVersion);
}

TEST(Cli, GnpForTrivialClassReportsHodge) {
  JobConfig cfg;
  cfg.command = "gnp";
  cfg.p = 7;
  auto r = run_command(cfg);
  EXPECT_EQ(r.exit_code, kExitOk);
}

TEST(Cli, MissingPrimeIsConfigError) {
  JobConfig cfg;
  cfg.command = "gnp";
  EXPECT_EQ(run_command(cfg).exit_code, kExitConfig);
  cfg.command = "nonsense";
  EXPECT_EQ(run_command(cfg).exit_code, kExitConfig);
}

TEST(Cli, BudgetExceededExitCode) {
  JobConfig cfg;
  cfg.command = "crosscheck";
  cfg.p = 5;
  cfg.f = CoeffMap{{{1, 0}, 1}, {{0, 1}, 1}};
  cfg.ks = {3};
  cfg.budget = 100;
  EXPECT_EQ(run_command(cfg).exit_code, kExitBudget);
}

TEST(Cli, ConfigKeysOverrideFlags) {
  JobConfig cfg;
  cfg.command = "table";
  cfg.d1 = 2;
  apply_config(cfg, Json{{"d1", 3}, {"d2", 4}});
  EXPECT_EQ(cfg.d1, 3);
  EXPECT_EQ(cfg.d2, 4);
  EXPECT_EQ(run_command(cfg).exit_code, kExitOk);
}

TEST(Cli, EigencurveConservation) {
  JobConfig cfg;
  cfg.command = "eigencurve";
  cfg.p = 5;
  cfg.imax = 5;
  auto r = run_command(cfg);
  EXPECT_EQ(r.exit_code, kExitOk);
}

TEST(Cli, ParsePolynomial) {
  auto in = parse_polynomial(Json{{"p", 5}, {"d1", 3}, {"d2", 3}, {"coeffs", {{"1,0", 1}, {"0,1", 4}}}});
  EXPECT_EQ(in.coeffs.size(), 2u);
  EXPECT_EQ(in.coeffs.at({0, 1}), 4);
  EXPECT_THROW(parse_polynomial(Json{{"coeffs", {{"x", 1}}}}), Error);
}
