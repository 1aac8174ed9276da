#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "commands.hpp"

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("fm_cli_") + info->name() + "_" +
                                        std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + FLOWERMATCH_CLI_PATH + "\" " + args + " >\"" +
                            (dir_ / "stdout.txt").string() + "\" 2>\"" + (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return "\"" + (dir_ / name).string() + "\""; }

  std::string slurp(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path dir_;
};

TEST_F(CliTest, SimulateIsByteIdenticalAcrossRunsAndThreads) {
  ASSERT_EQ(run("--trials 400 --threads 1 --out " + path("a") + " simulate"), 0);
  ASSERT_EQ(run("--trials 400 --threads 1 --out " + path("b") + " simulate"), 0);
  ASSERT_EQ(run("--trials 400 --threads 6 --out " + path("c") + " simulate"), 0);
  const std::string a = slurp("a/noise_sweep.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp("b/noise_sweep.csv"));
  EXPECT_EQ(a, slurp("c/noise_sweep.csv"));
  EXPECT_EQ(csv(a).size(), 5u);
}

TEST_F(CliTest, SimulateToStdoutWithoutOutDir) {
  flowermatch::cli::RunConfig cfg;
  cfg.trials = 100;
  cfg.noise = {0.01, 0.02};
  cfg.threads = 1;
  std::ostringstream out, err;
  ASSERT_EQ(flowermatch::cli::cmd_simulate(cfg, out, err), 0);
  EXPECT_EQ(out.str().rfind("noise,frobenius_norm,outlier_pct\n", 0), 0u);
  EXPECT_EQ(csv(out.str()).size(), 2u);
}

TEST_F(CliTest, CountGateRejectsEveryPair) {
  ASSERT_EQ(run("--seed 3 generate " + path("ref.jsonl") + " --frames 25"), 0);
  ASSERT_EQ(run("--seed 3 --flowers 4 generate " + path("obs.jsonl") + " --frames 25"), 0);
  ASSERT_EQ(run("--out " + path("m") + " match " + path("ref.jsonl") + " " + path("obs.jsonl")), 0);
  EXPECT_NE(slurp("m/match_summary.json").find("\"total_matches\": 0"), std::string::npos);
  for (const auto& row : csv(slurp("m/match_pairs.csv"))) {
    ASSERT_EQ(row.size(), 6u);
    EXPECT_EQ(row[4], "0");
    EXPECT_EQ(row[5], "0");
  }
}

TEST_F(CliTest, HigherConfidenceMatchesSuperset) {
  ASSERT_EQ(run("--seed 5 generate " + path("ref.jsonl") + " --frames 40"), 0);
  ASSERT_EQ(run("--seed 6 generate " + path("obs.jsonl") + " --frames 40"), 0);
  ASSERT_EQ(run("--confidence 0.95 --out " + path("lo") + " match " + path("ref.jsonl") + " " + path("obs.jsonl")), 0);
  ASSERT_EQ(run("--confidence-pct 99.9 --out " + path("hi") + " match " + path("ref.jsonl") + " " + path("obs.jsonl")), 0);
  const auto lo = csv(slurp("lo/match_pairs.csv"));
  const auto hi = csv(slurp("hi/match_pairs.csv"));
  ASSERT_EQ(lo.size(), hi.size());
  std::size_t lo_count = 0, hi_count = 0;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    EXPECT_EQ(lo[k][2], hi[k][2]);
    if (lo[k][5] == "1") {
      ++lo_count;
      EXPECT_EQ(hi[k][5], "1");
    }
    if (hi[k][5] == "1") ++hi_count;
  }
  EXPECT_GE(hi_count, lo_count);
}

TEST_F(CliTest, EmptyAfterPruningFails) {
  std::ofstream(dir_ / "empty.jsonl") << "{\"version\":1,\"type\":\"header\",\"name\":\"e\",\"flower_count\":3}\n";
  ASSERT_EQ(run("--seed 3 generate " + path("ref.jsonl") + " --frames 5"), 0);
  EXPECT_NE(run("--out " + path("m") + " match " + path("ref.jsonl") + " " + path("empty.jsonl")), 0);
  EXPECT_NE(slurp("stderr.txt").find("error"), std::string::npos);
}

TEST_F(CliTest, ZeroPaddingArmsAgree) {
  ASSERT_EQ(run("--padding 0 --out " + path("p") + " padding-study --samples 300"), 0);
  const auto rows = csv(slurp("p/padding_study.csv"));
  ASSERT_EQ(rows.size(), 2u);
  for (std::size_t c = 1; c < rows[0].size(); ++c) EXPECT_EQ(rows[0][c], rows[1][c]);
  EXPECT_TRUE(fs::exists(dir_ / "p/padding_study.json"));
}

TEST_F(CliTest, InvalidArgumentsFailBeforeWork) {
  EXPECT_NE(run("--confidence 1.5 simulate"), 0);
  EXPECT_NE(run("--noise -0.01 simulate"), 0);
  EXPECT_NE(run("--trials 0 simulate"), 0);
  EXPECT_NE(run("match " + path("nope.jsonl") + " " + path("nope.jsonl")), 0);
  EXPECT_NE(run("no-such-command"), 0);
}

TEST_F(CliTest, DescribeWritesArtifacts) {
  ASSERT_EQ(run("--seed 4 generate " + path("d.jsonl") + " --frames 20 --corrupt 0.2"), 0);
  ASSERT_EQ(run("--out " + path("desc") + " describe " + path("d.jsonl")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "desc/descriptors.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "desc/prune_report.csv"));
  const std::string dist = slurp("desc/distribution.json");
  EXPECT_NE(dist.find("\"ellipse\""), std::string::npos);
  EXPECT_NE(dist.find("\"flower_count\": 3"), std::string::npos);
  EXPECT_NE(run("--out " + path("desc2") + " describe " + path("d.jsonl") + " --frame 999"), 0);
}

}  // namespace
