#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace magdock::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("magdock_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "magdock");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str({});
    err_.str({});
    return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::string without_metadata(const std::string& text) {
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line)) {
      if (line.find("created_at") == std::string::npos) out += line + '\n';
    }
    return out;
  }

  static std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      std::vector<std::string> row;
      std::stringstream ls(line);
      for (std::string f; std::getline(ls, f, ',');) row.push_back(f);
      rows.push_back(row);
    }
    return rows;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, MissingConfigIsUsageErrorAndWritesNothing) {
  EXPECT_EQ(run({"run", "--config", (dir_ / "nope.json").string(), "--out", dir_.string()}), kExitUsage);
  EXPECT_FALSE(fs::exists(dir_));
  EXPECT_NE(err_.str().find("not found"), std::string::npos);
}

TEST_F(CliTest, InvalidConfigIsUsageError) {
  fs::create_directories(dir_);
  std::ofstream(dir_ / "bad.json") << R"({"scenario": "S1_Hover", "bogus": true})";
  EXPECT_EQ(run({"run", "--config", (dir_ / "bad.json").string(), "--out", (dir_ / "o").string()}),
            kExitUsage);
  EXPECT_FALSE(fs::exists(dir_ / "o"));
}

TEST_F(CliTest, DryRunWritesNothing) {
  EXPECT_EQ(run({"run", "--scenario", "S2_Linear", "--seeds", "1..10", "--dry-run", "--out",
                 dir_.string()}),
            kExitOk);
  EXPECT_NE(out_.str().find("config ok"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_));
}

TEST_F(CliTest, EmptySeedRangeIsUsageError) {
  EXPECT_EQ(run({"run", "--seeds", "5..4", "--out", dir_.string()}), kExitUsage);
  EXPECT_EQ(run({"run", "--seeds", "x", "--out", dir_.string()}), kExitUsage);
  EXPECT_FALSE(fs::exists(dir_));
}

TEST_F(CliTest, UnknownInputsAreUsageErrors) {
  EXPECT_EQ(run({"sweep", "--param", "warp_factor", "--values", "1,2", "--out", dir_.string()}),
            kExitUsage);
  EXPECT_EQ(run({"run", "--scenario", "S7", "--out", dir_.string()}), kExitUsage);
  EXPECT_EQ(run({"run", "--no-such-flag"}), kExitUsage);
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_FALSE(fs::exists(dir_));
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}), kExitOk); }

TEST_F(CliTest, SeedParsing) {
  EXPECT_EQ(parse_seeds("1..3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(parse_seeds("4,9"), (std::vector<std::uint64_t>{4, 9}));
  EXPECT_EQ(parse_seeds("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_TRUE(parse_seeds("5..4").empty());
}

TEST_F(CliTest, RunWritesOneLogPerSeedAndAggregate) {
  ASSERT_EQ(run({"run", "--scenario", "S1_Hover", "--seeds", "1..10", "--out", dir_.string()}), kExitOk)
      << err_.str();
  for (int s = 1; s <= 10; ++s) {
    EXPECT_TRUE(fs::exists(dir_ / ("trial_" + std::to_string(s) + ".csv")));
    EXPECT_TRUE(fs::exists(dir_ / ("trial_" + std::to_string(s) + ".json")));
  }
  const std::string agg = slurp(dir_ / "aggregate.json");
  EXPECT_NE(agg.find("\"mean_rmse\""), std::string::npos);
  const auto rows = csv_rows(slurp(dir_ / "table.csv"));
  EXPECT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[11][0], "Mean");
  EXPECT_EQ(rows[12][0], "SC");
}

TEST_F(CliTest, OutputRootFromEnvironment) {
  setenv(kOutputRootEnv, dir_.c_str(), 1);
  const int rc = run({"calibrate", "--n-cal", "4"});
  unsetenv(kOutputRootEnv);
  EXPECT_EQ(rc, kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "calibration.json"));
}

TEST_F(CliTest, CalibrateGivesUnitCoefficients) {
  ASSERT_EQ(run({"calibrate", "--out", dir_.string()}), kExitOk) << err_.str();
  const std::string text = out_.str();
  for (int i = 1; i <= 4; ++i) {
    const auto pos = text.find("C" + std::to_string(i) + " = ");
    ASSERT_NE(pos, std::string::npos);
    const double c = std::stod(text.substr(pos + 5));
    EXPECT_GT(c, 0.0);
    EXPECT_NEAR(c, 1.0, 0.01);
  }
  EXPECT_EQ(text.find("note:"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "calibration.json"));
}

TEST_F(CliTest, CalibrateAbsorbsGain) {
  ASSERT_EQ(run({"calibrate", "--gain", "2", "--out", dir_.string()}), kExitOk) << err_.str();
  const std::string text = out_.str();
  for (int i = 1; i <= 4; ++i) {
    const auto pos = text.find("C" + std::to_string(i) + " = ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(text.substr(pos + 5)), 2.0, 0.02);
  }
}

TEST_F(CliTest, CalibrateSingleFrameWarns) {
  ASSERT_EQ(run({"calibrate", "--n-cal", "1", "--out", dir_.string()}), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("note:"), std::string::npos);
}

TEST_F(CliTest, CalibrationFileIsReusable) {
  ASSERT_EQ(run({"calibrate", "--out", dir_.string()}), kExitOk);
  EXPECT_EQ(run({"run", "--calibration", (dir_ / "calibration.json").string(), "--seeds", "1",
                 "--out", (dir_ / "r").string()}),
            kExitOk)
      << err_.str();
}

TEST_F(CliTest, SweepWritesOneRowPerPoint) {
  ASSERT_EQ(run({"sweep", "--scenario", "S1_Hover", "--param", "attitude_sigma_deg", "--range",
                 "0:12:5", "--seeds", "1..3", "--out", dir_.string()}),
            kExitOk)
      << err_.str();
  const auto rows = csv_rows(slurp(dir_ / "sweep_attitude_sigma_deg.csv"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0][0], "parameter");
  // More attitude error can only make the hover worse on average.
  EXPECT_LT(std::stod(rows[1][2]), std::stod(rows[5][2]));
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(rows[k][5], "3");
}

TEST_F(CliTest, SinglePointSweepMatchesRun) {
  ASSERT_EQ(run({"sweep", "--param", "tof_sigma", "--values", "0.005", "--seeds", "1..2", "--out",
                 dir_.string()}),
            kExitOk)
      << err_.str();
  const auto rows = csv_rows(slurp(dir_ / "sweep_tof_sigma.csv"));
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_EQ(run({"run", "--seeds", "1..2", "--out", (dir_ / "r").string()}), kExitOk);
  const auto table = csv_rows(slurp(dir_ / "r" / "table.csv"));
  EXPECT_NEAR(std::stod(rows[1][2]) * 100.0, std::stod(table[3][2]), 1e-6);
}

TEST_F(CliTest, OutputsAreReproducible) {
  const std::vector<std::string> a{"run", "--scenario", "S3_Composite", "--seeds", "3,4"};
  auto args = a;
  args.insert(args.end(), {"--out", (dir_ / "a").string(), "--threads", "2"});
  ASSERT_EQ(run(args), kExitOk);
  args = a;
  args.insert(args.end(), {"--out", (dir_ / "b").string(), "--threads", "1"});
  ASSERT_EQ(run(args), kExitOk);
  for (const char* f : {"trial_3.csv", "trial_4.csv", "trial_3.json", "table.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  EXPECT_EQ(without_metadata(slurp(dir_ / "a" / "aggregate.json")),
            without_metadata(slurp(dir_ / "b" / "aggregate.json")));
}

}  // namespace
}  // namespace magdock::cli
