#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ttroute/cli.hpp"

namespace fs = std::filesystem;

namespace {

// Runs the CLI in-process with stdout and stderr discarded.
int run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"ttroute"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : owned) argv.push_back(s.data());
  std::fflush(stdout);
  std::fflush(stderr);
  const int out = ::dup(STDOUT_FILENO);
  const int err = ::dup(STDERR_FILENO);
  std::FILE* null = std::fopen("/dev/null", "w");
  ::dup2(::fileno(null), STDOUT_FILENO);
  ::dup2(::fileno(null), STDERR_FILENO);
  const int rc = ttroute::run_cli(static_cast<int>(argv.size()), argv.data());
  std::fflush(stdout);
  std::fflush(stderr);
  ::dup2(out, STDOUT_FILENO);
  ::dup2(err, STDERR_FILENO);
  ::close(out);
  ::close(err);
  std::fclose(null);
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ttroute-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_EQ(run({"experiment", "--help"}), 0);
}

TEST_F(CliTest, BadArgumentsExitTwo) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"fly"}), 2);
  EXPECT_EQ(run({"experiment", "--repetitions", "30"}), 2);
  EXPECT_EQ(run({"experiment", "--snr", "20"}), 2);
  EXPECT_EQ(run({"experiment", "--regression-no", "12"}), 2);
  EXPECT_EQ(run({"plan", "--provider", "oracle"}), 2);
  EXPECT_EQ(run({"experiment", "--map", "7"}), 2);
  EXPECT_EQ(run({"gen-map", "--family", "maze"}), 2);
  EXPECT_EQ(run({"sweep", "--kind", "speed"}), 2);
  EXPECT_EQ(run({"plan", "--map", "1"}), 2);
  EXPECT_EQ(run({"plan", "--map", "1", "--source", "0", "--dest", "100000"}), 2);
  EXPECT_EQ(run({"plan", "--map", "/nonexistent/map.json", "--source", "0", "--dest", "1"}), 2);
}

TEST_F(CliTest, RuntimeFailureExitsOne) {
  fs::create_directories(dir_);
  std::ofstream(dir_ / "broken.json") << "{";
  EXPECT_EQ(run({"plan", "--map", (dir_ / "broken.json").string(), "--source", "0", "--dest", "1"}), 1);
  // An output path that is a regular file cannot be used as a directory.
  std::ofstream(dir_ / "occupied") << "x";
  EXPECT_EQ(run({"experiment", "--repetitions", "20", "--seed", "1", "-o", (dir_ / "occupied").string()}), 1);
}

TEST_F(CliTest, GenMapWritesALoadableMap) {
  ASSERT_EQ(run({"gen-map", "--family", "hub", "--seed", "3", "-o", out()}), 0);
  const fs::path map = dir_ / "hub-3.json";
  ASSERT_TRUE(fs::exists(map));
  EXPECT_EQ(run({"plan", "--map", map.string(), "--source", "0", "--dest", "5"}), 0);
}

TEST_F(CliTest, ExperimentWritesCsvsDeterministically) {
  ASSERT_EQ(run({"experiment", "--map", "3", "--repetitions", "20", "--seed", "4", "-o", out("a")}), 0);
  ASSERT_EQ(run({"experiment", "--map", "3", "--repetitions", "20", "--seed", "4", "-o", out("b")}), 0);
  for (const char* f : {"summary.csv", "records.csv"}) {
    ASSERT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const std::string summary = slurp(dir_ / "a" / "summary.csv");
  EXPECT_EQ(summary.rfind("map,provider,repetitions,r,snr_db,seed,mean_est_cost,mean_true_cost,"
                          "saving_pct_vs_heuristic\n",
                          0),
            0u);
}

TEST_F(CliTest, OtherSubcommandsWriteTheirFiles) {
  ASSERT_EQ(run({"simulate", "--map", "2", "--repetitions", "20", "-o", out("sim")}), 0);
  for (const char* f : {"paths.csv", "observations.csv", "trace.csv"}) EXPECT_TRUE(fs::exists(dir_ / "sim" / f));
  ASSERT_EQ(run({"compare", "--warmup", "5", "-o", out("cmp")}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "cmp" / "comparison.csv"));
  ASSERT_EQ(run({"plan", "--write", "--provider", "static", "--source", "0", "--dest", "20", "-o", out("plan")}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "plan" / "paths.csv"));
}

TEST_F(CliTest, ConfigFileIsHonoured) {
  fs::create_directories(dir_);
  const fs::path cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"map": 1, "providers": ["heuristic"], "repetitions": 20, "seeds": [3]})";
  ASSERT_EQ(run({"experiment", "--config", cfg.string(), "-o", out("run")}), 0);
  const std::string summary = slurp(dir_ / "run" / "summary.csv");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 2);
  std::ofstream(dir_ / "bad.json") << R"({"volume": 11})";
  EXPECT_EQ(run({"experiment", "--config", (dir_ / "bad.json").string()}), 2);
}

TEST_F(CliTest, SweepSnr) {
  ASSERT_EQ(run({"sweep", "--kind", "snr", "--repetitions", "20", "--seed", "2", "-o", out()}), 0);
  const std::string summary = slurp(dir_ / "summary.csv");
  EXPECT_NE(summary.find(",10,"), std::string::npos);
  EXPECT_NE(summary.find(",50,"), std::string::npos);
}
