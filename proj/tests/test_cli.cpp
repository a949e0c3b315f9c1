#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"

namespace qcorr::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qcorr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST_F(CliTest, GenGhzThenEval) {
  const auto g = invoke({"gen", "--family", "ghz", "-o", path("ghz.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("dims [2,2,2] rank 1 entropy"), std::string::npos) << g.out;
  const DensityMatrix ghz = parse_state(slurp(path("ghz.json")));
  EXPECT_EQ(ghz.dims(), (Dims{2, 2, 2}));

  const auto corr = invoke({"eval", path("ghz.json"), "corr"});
  EXPECT_EQ(corr.code, 0);
  EXPECT_EQ(corr.out, "3\n");
  EXPECT_EQ(invoke({"eval", path("ghz.json"), "entropy"}).out.substr(0, 1), "0");
  EXPECT_EQ(invoke({"eval", path("ghz.json"), "within", "{2,3}"}).out, "1\n");
  EXPECT_EQ(invoke({"eval", path("ghz.json"), "among", "{1}|{2,3}"}).out, "2\n");
  EXPECT_EQ(invoke({"eval", path("ghz.json"), "excess", "1", "2,3", "3"}).out, "1\n");
  const auto dec = invoke({"eval", path("ghz.json"), "decompose", "(1,(2,3))"});
  EXPECT_EQ(dec.out, "I({1},{2,3}) 2\nI({2},{3}) 1\n3\n");
}

TEST_F(CliTest, EvalBellAndProduct) {
  ASSERT_EQ(invoke({"gen", "--family", "bell", "-o", path("bell.json")}).code, 0);
  EXPECT_EQ(invoke({"eval", path("bell.json"), "mutual", "1", "2"}).out, "2\n");
  ASSERT_EQ(invoke({"gen", "--family", "product", "--dims", "2,2,2", "--cut", "1", "-o", path("p.json")}).code, 0);
  const auto among = invoke({"eval", path("p.json"), "among", "{1}|{2,3}"});
  EXPECT_EQ(among.code, 0);
  EXPECT_LT(std::abs(std::stod(among.out)), 1e-10);
}

TEST_F(CliTest, GenIsReproducible) {
  const std::vector<std::string> base{"gen", "--family", "theorem2", "--dims", "4,4,2", "--blocks", "2,2",
                                      "--weights", "0.5,0.5", "--seed", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"-o", path("a.json"), "--mixture-output", path("am.json")});
  b.insert(b.end(), {"-o", path("b.json"), "--mixture-output", path("bm.json")});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("am.json")), slurp(path("bm.json")));
  EXPECT_NO_THROW(parse_mixture(slurp(path("am.json"))));
}

TEST_F(CliTest, GenRandomToStdout) {
  const auto r = invoke({"gen", "--family", "random", "--dims", "2,2", "--rank", "4", "--seed", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NO_THROW(parse_state(r.out));
  EXPECT_NE(r.err.find("rank 4"), std::string::npos);
}

TEST_F(CliTest, VerifyTheorem1Samples) {
  const auto r = invoke({"verify", "theorem1", "--dims", "2,2,2", "--samples", "100", "--seed", "42",
                         "--report", path("t1.json"), "--timestamp", "2026-01-01T00:00:00Z"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto recs = parse_reports_json(slurp(path("t1.json")));
  EXPECT_EQ(recs.size(), 500u);
  for (const auto& rec : recs) EXPECT_TRUE(rec.report.passed);
  EXPECT_EQ(recs.front().report.seed, std::optional<std::uint64_t>(42));
  EXPECT_EQ(recs.back().report.seed, std::optional<std::uint64_t>(141));
}

TEST_F(CliTest, VerifyTheorem2Golden) {
  const auto r = invoke({"verify", "theorem2", "--dims", "4,4,2", "--blocks", "2,2", "--weights", "0.5,0.5",
                         "--out", "csv", "--timestamp", "t"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto recs = parse_reports_csv(r.out);
  ASSERT_EQ(recs.size(), 5u);
  for (const auto& rec : recs) EXPECT_TRUE(rec.report.passed) << rec.report.check_name;
}

TEST_F(CliTest, VerifySsaReportsEqualityCount) {
  const auto r = invoke({"verify", "ssa", "--dims", "2,2,2", "--samples", "100", "--report", path("s.csv"),
                         "--out", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("600 checks, 600 passed"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("SSA equality detected in 0"), std::string::npos) << r.out;
}

TEST_F(CliTest, EveryCheckPassesWithDefaults) {
  for (const char* check : {"lemma1", "theorem1", "corollary1", "ssa", "eq19", "corollary2", "lemma2", "lemma3",
                            "lemma4", "lemma5", "theorem2"}) {
    const auto r = invoke({"verify", check, "--samples", "3", "--timestamp", "t"});
    EXPECT_EQ(r.code, 0) << check << ": " << r.err;
  }
  const auto rem = invoke({"verify", "remark1", "--blocks", "1,2,1", "--timestamp", "t"});
  EXPECT_EQ(rem.code, 0) << rem.err;
  const auto l4 = invoke({"verify", "lemma4", "--family", "orthogonal", "--dims", "2,2", "--blocks", "2,2"});
  EXPECT_EQ(l4.code, 0) << l4.err;
}

TEST_F(CliTest, FailedCheckExitsOne) {
  ASSERT_EQ(invoke({"gen", "--family", "ghz", "-o", path("ghz.json")}).code, 0);
  const auto r = invoke({"verify", "ssa", "--state", path("ghz.json"), "--a", "1", "--b", "2,3", "--discard", "3",
                         "--mode", "equality"});
  EXPECT_EQ(r.code, 1);
  const auto recs = parse_reports_json(r.out);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_FALSE(recs[0].report.passed);
  EXPECT_FALSE(recs[0].report.seed.has_value());
}

TEST_F(CliTest, PremiseViolationsExitTwo) {
  EXPECT_EQ(invoke({"verify", "lemma3", "--family", "mixture", "--dims", "2,2"}).code, 2);
  EXPECT_EQ(invoke({"verify", "lemma5", "--family", "mixture", "--dims", "2,2"}).code, 2);
  EXPECT_EQ(invoke({"verify", "lemma2", "--family", "mixture", "--dims", "2,2,2"}).code, 2);
  EXPECT_EQ(invoke({"verify", "corollary2", "--family", "random", "--dims", "2,2,2,2"}).code, 2);
  EXPECT_EQ(invoke({"verify", "remark1", "--family", "mixture", "--dims", "2"}).code, 2);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"gen"}).code, 2);
  EXPECT_EQ(invoke({"gen", "--family", "nope"}).code, 2);
  EXPECT_EQ(invoke({"gen", "--family", "random", "--dims", "4097"}).code, 2);
  EXPECT_EQ(invoke({"gen", "--family", "random", "--dims", "4,4", "--max-dim", "8"}).code, 2);
  EXPECT_EQ(invoke({"eval", path("missing.json"), "corr"}).code, 2);
  EXPECT_EQ(invoke({"verify", "nope"}).code, 2);
  EXPECT_EQ(invoke({"verify", "ssa", "--log-base", "e"}).code, 2);
  EXPECT_EQ(invoke({"verify", "ssa", "--samples", "0"}).code, 2);
  std::ofstream(path("bad.json")) << R"({"dims": [2], "matrix": [[0.5,0],[0,0],[0,0],[0.4,0]]})";
  const auto r = invoke({"eval", path("bad.json"), "corr"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("trace"), std::string::npos) << r.err;
}

TEST_F(CliTest, NatsOption) {
  ASSERT_EQ(invoke({"gen", "--family", "bell", "-o", path("bell.json")}).code, 0);
  const auto r = invoke({"eval", path("bell.json"), "mutual", "1", "2", "--log-base", "nats"});
  EXPECT_NEAR(std::stod(r.out), 2.0 * std::log(2.0), 1e-12);
}

TEST_F(CliTest, ReportsAreByteIdenticalAcrossRuns) {
  for (const char* fmt : {"json", "csv"}) {
    const std::vector<std::string> base{"verify", "theorem2", "--seed", "9", "--samples", "3", "--out", fmt,
                                        "--timestamp", "2026-01-01T00:00:00Z", "--report"};
    auto a = base, b = base;
    a.push_back(path("a.out"));
    b.push_back(path("b.out"));
    ASSERT_EQ(invoke(a).code, 0);
    ASSERT_EQ(invoke(b).code, 0);
    EXPECT_EQ(slurp(path("a.out")), slurp(path("b.out")));
  }
}

TEST_F(CliTest, Version) {
  const auto r = invoke({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}

}  // namespace
}  // namespace qcorr::cli
