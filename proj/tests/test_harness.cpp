#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "halfdens/harness.hpp"

using namespace halfdens;

TEST(SuiteConfig, JsonRoundTripAndValidation) {
  SuiteConfig c;
  c.seed = 99;
  c.nodes_per_dim = 24;
  c.trials = 3;
  c.signature = SignatureSpec(0, 1);
  c.diffeo_catalog = {Diffeo1D::sine(0.2)};
  const SuiteConfig back = SuiteConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());

  SuiteConfig bad;
  bad.trials = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SuiteConfig{};
  bad.nodes_per_dim = 4;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SuiteConfig{};
  bad.n_max = 5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(RunSuite, UnknownNameThrows) { EXPECT_THROW(run_suite("no-such-suite", SuiteConfig{}), std::invalid_argument); }

TEST(RunSuite, NamesAreComplete) { EXPECT_EQ(suite_names().size(), 12u); }

TEST(RunSuite, RescalingIsExact) {
  const auto r = run_suite("rescaling", SuiteConfig{});
  EXPECT_TRUE(r.all_pass());
  for (const auto& row : r.rows) EXPECT_LT(row.rel_err, 1e-14) << row.case_id;
}

TEST(RunSuite, UnitarityDefaultsPass) {
  const auto r = run_suite("unitarity", SuiteConfig{});
  EXPECT_TRUE(r.all_pass());
  for (const auto& row : r.rows) EXPECT_EQ(row.nodes, 48);
}

TEST(RunSuite, BodyIndependentOfThreadCount) {
  SuiteConfig one;
  one.threads = 1;
  one.trials = 6;
  SuiteConfig many = one;
  many.threads = 4;
  for (const char* suite : {"representation-law", "kspace-axioms", "measure-invariance"})
    EXPECT_EQ(run_suite(suite, one).body(), run_suite(suite, many).body()) << suite;
}

TEST(RunSuite, SeedChangesCases) {
  SuiteConfig a;
  a.trials = 2;
  SuiteConfig b = a;
  b.seed = a.seed + 1;
  EXPECT_NE(run_suite("pushforward-product", a).body(), run_suite("pushforward-product", b).body());
}

TEST(WriteReport, WritesBodyAndTiming) {
  SuiteConfig c;
  c.trials = 1;
  const auto r = run_suite("graded-orthogonality", c);
  const auto dir = std::filesystem::temp_directory_path() / "halfdens_report_test";
  const std::string path = (dir / "go.jsonl").string();
  write_report(r, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), r.body());
  EXPECT_TRUE(std::filesystem::exists(path + ".timing.jsonl"));
  EXPECT_THROW(write_report(r, "/proc/halfdens/nope.jsonl"), std::runtime_error);
}

TEST(SuiteReport, SummaryLine) {
  SuiteReport r{"demo", {}};
  ReportRow ok;
  ok.case_id = "a";
  ok.pass = true;
  ReportRow bad;
  bad.case_id = "b";
  r.rows = {ok, bad};
  EXPECT_EQ(r.failures(), 1u);
  EXPECT_FALSE(r.all_pass());
  const std::string body = r.body();
  EXPECT_NE(body.find(R"({"summary":{"suite":"demo","rows":2,"failed":1,"pass":false}})"), std::string::npos);
}

TEST(ConvergenceStudy, UnitarityDecreasesStrictly) {
  const auto r = convergence_study("unitarity", {16, 32, 64}, SuiteConfig{});
  EXPECT_TRUE(r.strictly_decreasing);
  EXPECT_TRUE(r.decays);
}

TEST(ConvergenceStudy, IdentityIsZero) {
  const auto r = convergence_study("identity", {16, 32}, SuiteConfig{});
  for (const auto& row : r.rows) EXPECT_EQ(row.rel_err, 0.0);
}

TEST(ConvergenceStudy, MeasureInvarianceFinalRung) {
  const auto r = convergence_study("measure-invariance", {16, 32, 64}, SuiteConfig{});
  EXPECT_LT(r.rows.back().rel_err, 1e-5);
  EXPECT_TRUE(r.decays);
}

TEST(ConvergenceStudy, RejectsBadLadder) {
  EXPECT_THROW(convergence_study("unitarity", {32, 16}, SuiteConfig{}), std::invalid_argument);
  EXPECT_THROW(convergence_study("unitarity", {}, SuiteConfig{}), std::invalid_argument);
  EXPECT_THROW(convergence_study("bogus", {16}, SuiteConfig{}), std::invalid_argument);
}
