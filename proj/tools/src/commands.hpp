#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace magdock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kOutputRootEnv = "MAGDOCK_OUT";

struct RunManifest {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir;
  std::optional<std::vector<std::uint64_t>> seeds;  // absent: the config seed
  std::optional<std::string> scenario;
  bool disable_mi = false;
  bool dry_run = false;
  int threads = 0;
  std::optional<std::filesystem::path> calibration;
};

// "a..b" (inclusive), "a,b,c" or a single integer. b < a yields no seeds.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err);
int cmd_calibrate(const RunManifest& m, int n_cal, double gain, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunManifest& m, const std::string& parameter, const std::vector<double>& values,
              std::ostream& out, std::ostream& err);

// Full argument parsing and dispatch; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magdock::cli
