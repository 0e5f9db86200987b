#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gaugelab/cli.hpp"
#include "gaugelab/common.hpp"

namespace fs = std::filesystem;
using namespace gaugelab;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gaugelab_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gaugelab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t file_count(const fs::path& dir) {
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
}

}  // namespace

TEST(Config, OverridesAndValidation) {
  auto cfg = cli::default_config();
  cli::apply_override(cfg, "grid.kmax=250");
  EXPECT_EQ(cfg["grid"]["kmax"].get<double>(), 250.0);
  cli::apply_override(cfg, "profile.kind=screened");
  EXPECT_EQ(cfg["profile"]["kind"], "screened");
  cli::apply_override(cfg, "scan.kmax_values=[5, 50]");
  EXPECT_EQ(cfg["scan"]["kmax_values"].size(), 2u);
  EXPECT_THROW(cli::apply_override(cfg, "grid.nope=1"), ParameterError);
  EXPECT_THROW(cli::apply_override(cfg, "grid.n_shells=1.5"), ParameterError);
  EXPECT_THROW(cli::apply_override(cfg, "grid=3"), ParameterError);
  EXPECT_THROW(cli::apply_override(cfg, "novalue"), ParameterError);
  EXPECT_THROW(cli::merge_config(cfg, nlohmann::json::parse(R"({"rs": {"steps": "many"}})")), ParameterError);
}

TEST(Cli, ScanNumberWritesContractColumns) {
  TempDir d;
  const auto r = run_cli({"scan-number", "--out", d.path.string(), "--set", "grid.n_shells=64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(d.path / "scan_number.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "kmin,kmax,n_shells,e,mu,m,N0,overlap_normalized");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(file_count(d.path), 1u);
}

TEST(Cli, ScanNumberMatchesGoldenFile) {
  TempDir d;
  const auto r = run_cli({"scan-number", "--out", d.path.string(), "--set", "grid.n_shells=64", "--set",
                          "scan.kmax_values=[10, 100, 1000]", "--set", "profile.e=0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(d.path / "scan_number.csv"), slurp(fs::path(GAUGELAB_GOLDEN_DIR) / "scan_number_small.csv"));
}

TEST(Cli, ConfigFileAndOverridePrecedence) {
  TempDir d;
  {
    std::ofstream cfg(d.path / "cfg.json");
    cfg << R"({"grid": {"n_shells": 32}, "scan": {"kmax_values": [10.0]}})";
  }
  fs::create_directories(d.path / "out");
  const auto r = run_cli({"scan-number", "--config", (d.path / "cfg.json").string(), "--set",
                          "grid.n_shells=48", "--out", (d.path / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(d.path / "out" / "scan_number.csv");
  EXPECT_NE(csv.find(",48,"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Cli, DeterministicAcrossRunsAndThreads) {
  TempDir d;
  fs::create_directories(d.path / "a");
  fs::create_directories(d.path / "b");
  for (const char* exp : {"ccr-report", "scan-number", "pj-check"}) {
    ASSERT_EQ(run_cli({exp, "--out", (d.path / "a").string(), "--seed", "7", "--set", "grid.n_shells=64"}).code, 0);
    ASSERT_EQ(run_cli({exp, "--out", (d.path / "b").string(), "--seed", "7", "--threads", "4", "--set",
                       "grid.n_shells=64"}).code, 0);
  }
  for (const auto& entry : fs::directory_iterator(d.path / "a"))
    EXPECT_EQ(slurp(entry.path()), slurp(d.path / "b" / entry.path().filename())) << entry.path();
}

TEST(Cli, ParameterErrorsExitTwoWithoutOutput) {
  TempDir d;
  const auto bad_key = run_cli({"scan-number", "--out", d.path.string(), "--set", "grid.bogus=1"});
  EXPECT_EQ(bad_key.code, 2);
  const auto bad_value = run_cli({"scan-number", "--out", d.path.string(), "--set", "grid.kmin=-1"});
  EXPECT_EQ(bad_value.code, 2);
  const auto unknown = run_cli({"frobnicate", "--out", d.path.string()});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("scan-number"), std::string::npos);
  {
    std::ofstream cfg(d.path / "broken.json");
    cfg << "{ not json";
  }
  EXPECT_EQ(run_cli({"weyl", "--config", (d.path / "broken.json").string(), "--out", d.path.string()}).code, 2);
  EXPECT_EQ(run_cli({"weyl", "--out", (d.path / "missing").string()}).code, 2);
  EXPECT_EQ(run_cli({"weyl", "--threads", "0"}).code, 2);
  EXPECT_EQ(file_count(d.path), 1u);  // only broken.json
}

TEST(Cli, GuardViolationExitsThree) {
  TempDir d;
  const auto r = run_cli({"oracle-check", "--out", d.path.string(), "--set", "fock.n_max=2", "--set",
                          "fock.alpha=0.9", "--set", "fock.modes=1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("guard"), std::string::npos);
  EXPECT_EQ(file_count(d.path), 0u);
}

TEST(Cli, SmallOracleCheckPasses) {
  TempDir d;
  const auto r = run_cli({"oracle-check", "--out", d.path.string(), "--set", "fock.n_max=8", "--set",
                          "fock.alpha=0.3", "--set", "fock.modes=2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string out = slurp(d.path / "oracle_check.jsonl");
  std::istringstream lines(out);
  int n = 0;
  for (std::string line; std::getline(lines, line); ++n) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j["pass"].get<bool>()) << line;
    EXPECT_LE(j["residual"].get<double>(), 1e-8);
  }
  EXPECT_EQ(n, 5);
}

TEST(Cli, OtherExperimentsRun) {
  TempDir d;
  EXPECT_EQ(run_cli({"overlap", "--out", d.path.string(), "--set", "grid.n_shells=64"}).code, 0);
  EXPECT_EQ(run_cli({"gauge-check", "--out", d.path.string(), "--set", "gauge.n_max=2"}).code, 0);
  EXPECT_EQ(run_cli({"weyl", "--out", d.path.string()}).code, 0);
  EXPECT_EQ(run_cli({"rs-evolve", "--out", d.path.string(), "--set", "rs.n=8", "--set", "rs.steps=4", "--set",
                     "rs.snapshot_every=2"}).code, 0);
  EXPECT_TRUE(fs::exists(d.path / "overlap.csv"));
  EXPECT_TRUE(fs::exists(d.path / "gauge_check.jsonl"));
  EXPECT_TRUE(fs::exists(d.path / "weyl.jsonl"));
  EXPECT_TRUE(fs::exists(d.path / "rs_evolve.csv"));
  EXPECT_TRUE(fs::exists(d.path / "rs_snapshot_000000.csv"));
  EXPECT_TRUE(fs::exists(d.path / "rs_snapshot_000004.csv"));
  EXPECT_FALSE(fs::exists(d.path / "rs_snapshot_000001.csv"));
  for (const auto& e : fs::directory_iterator(d.path)) EXPECT_NE(e.path().extension(), ".tmp");

  const std::string ov = slurp(d.path / "overlap.csv");
  EXPECT_EQ(ov.substr(0, ov.find('\n')), "t,kmin,kmax,n_shells,N0,raw_re,raw_im,overlap_normalized");
}

TEST(Cli, HelpExitsZero) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--set"), std::string::npos);
}
