// Drives the adaptive_mc executable end to end.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("adaptive_mc_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(ADAPTIVE_MC_CLI) + "' " +
                            args + " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir_;
};

std::map<std::string, std::string> row_as_map(const std::string& csv) {
  const auto ls = lines(csv);
  const auto header = split(ls.at(0));
  const auto values = split(ls.at(1));
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < header.size(); ++i) out[header[i]] = values.at(i);
  return out;
}

}  // namespace

TEST_F(Cli, GenerateWritesBundle) {
  const auto r = run("generate --m 60 --n 80 --r 4 --epsilon 0 --seed 1 --out inst");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(slurp(dir_ / "inst/meta").find("epsilon=0\n"), std::string::npos);
  EXPECT_NE(r.out.find("coherence"), std::string::npos);
  ASSERT_EQ(run("generate --m 60 --n 80 --r 4 --epsilon 0 --seed 1 --out inst2").exit_code, 0);
  EXPECT_EQ(slurp(dir_ / "inst/L.mat"), slurp(dir_ / "inst2/L.mat"));
  EXPECT_EQ(slurp(dir_ / "inst/M.mat"), slurp(dir_ / "inst2/M.mat"));
}

TEST_F(Cli, GenerateRejectsLargeEpsilon) {
  const auto r = run("generate --epsilon 0.3 --out inst");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("epsilon must be < 0.25"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "inst"));
}

TEST_F(Cli, RunNoiselessAndDeterministic) {
  ASSERT_EQ(run("generate --m 60 --n 80 --r 4 --epsilon 0 --seed 1 --out inst").exit_code, 0);
  ASSERT_EQ(run("run --instance inst --seed 1 --out a").exit_code, 0);
  ASSERT_EQ(run("run --instance inst --seed 1 --out b").exit_code, 0);
  const auto summary = row_as_map(slurp(dir_ / "a/summary.csv"));
  EXPECT_EQ(summary.at("k_final"), "4");
  EXPECT_LE(std::stod(summary.at("max_col_error")), 1e-8);
  for (const char* f : {"results.csv", "summary.csv", "manifest"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  EXPECT_EQ(lines(slurp(dir_ / "a/results.csv")).size(), 81u);
  const std::string manifest = slurp(dir_ / "a/manifest");
  for (const char* key : {"epsilon=", "delta=", "r=", "mu_upper=", "seed=", "budget_cap_to_m=",
                          "angle_cap_enabled=", "omega_redraw_policy="}) {
    EXPECT_NE(manifest.find(key), std::string::npos) << key;
  }
}

TEST_F(Cli, RunRejectsLargeDelta) {
  ASSERT_EQ(run("generate --m 20 --n 20 --r 2 --seed 1 --out inst").exit_code, 0);
  const auto r = run("run --instance inst --delta 0.2 --out a");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("delta"), std::string::npos);
}

TEST_F(Cli, RunMissingInstance) {
  const auto r = run("run --instance nowhere --out a");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("missing"), std::string::npos);
}

TEST_F(Cli, SweepRowCountAndMonotoneObservations) {
  const auto r = run("sweep --m 40 --n 30 --r 2 --epsilon 0,0.01,0.05 --trials 20 --seed 3 --out s.csv");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto ls = lines(slurp(dir_ / "s.csv"));
  ASSERT_EQ(ls.size(), 61u);
  const auto header = split(ls[0]);
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  std::map<std::string, double> obs;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = split(ls[i]);
    obs[f[col("epsilon")]] += std::stod(f[col("observations")]) / 20.0;
  }
  EXPECT_LE(obs.at("0"), obs.at("0.01"));
  EXPECT_LE(obs.at("0.01"), obs.at("0.05"));

  ASSERT_EQ(run("sweep --m 40 --n 30 --r 2 --epsilon 0,0.01,0.05 --trials 20 --seed 3 --out t.csv").exit_code, 0);
  EXPECT_EQ(slurp(dir_ / "s.csv"), slurp(dir_ / "t.csv"));
}

TEST_F(Cli, SingleCellSweepMatchesRun) {
  ASSERT_EQ(run("generate --m 80 --n 50 --r 3 --epsilon 0.02 --seed 9 --out inst").exit_code, 0);
  ASSERT_EQ(run("run --instance inst --seed 9 --out a").exit_code, 0);
  const auto r = run("sweep --m 80 --n 50 --r 3 --epsilon 0.02 --trials 1 --seed 9");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  const auto header = split(ls[0]);
  const auto values = split(ls[1]);
  std::map<std::string, std::string> sweep;
  for (std::size_t i = 0; i < header.size(); ++i) sweep[header[i]] = values[i];
  const auto summary = row_as_map(slurp(dir_ / "a/summary.csv"));
  for (const char* key : {"m", "n", "r", "epsilon", "delta", "k_final", "observations",
                          "max_col_error", "mean_col_error", "bound_violations"}) {
    EXPECT_EQ(sweep.at(key), summary.at(key)) << key;
  }
}

TEST_F(Cli, VerifyIndPasses) {
  const auto r = run("verify --names ind --trials 1000 --seed 7");
  EXPECT_EQ(r.exit_code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "name,trials,violations,violation_rate,theoretical_bound,worst_margin,params_json,seed,verdict");
  EXPECT_EQ(ls[1].substr(ls[1].rfind(',') + 1), "PASS");
}

TEST_F(Cli, VerifyAllEightRowsAndDeterministic) {
  const auto a = run("verify --names all --trials 50 --seed 2 --out v1.csv");
  const auto b = run("verify --names all --trials 50 --seed 2 --out v2.csv");
  EXPECT_EQ(a.exit_code, b.exit_code);
  EXPECT_EQ(lines(slurp(dir_ / "v1.csv")).size(), 9u);
  EXPECT_EQ(slurp(dir_ / "v1.csv"), slurp(dir_ / "v2.csv"));
}

TEST_F(Cli, VerifyNotApplicableKs14ExitsZero) {
  const auto r = run("verify --names ks14 --param d=10 --trials 50 --seed 1");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find(",N/A"), std::string::npos);
}

TEST_F(Cli, VerifyUnknownNameAndParam) {
  EXPECT_NE(run("verify --names bogus").exit_code, 0);
  const auto r = run("verify --names ind --param d=3");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("does not apply"), std::string::npos);
}
