#include "commands.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "magdock/errors.hpp"
#include "magdock/serialization.hpp"
#include "magdock/simulator.hpp"

namespace magdock::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) throw UsageError("invalid seed '" + s + "'");
  return v;
}

ScenarioConfig load_config(const RunManifest& m) {
  std::optional<ScenarioKind> kind;
  if (m.scenario) {
    kind = scenario_kind_from_string(*m.scenario);
    if (!kind) throw UsageError("unknown scenario '" + *m.scenario + "'");
  }
  ScenarioConfig cfg;
  if (m.config) {
    if (!fs::exists(*m.config)) throw UsageError("config file not found: " + m.config->string());
    cfg = load_scenario_config(*m.config, kind);
  } else {
    cfg = ScenarioConfig::preset(kind.value_or(ScenarioKind::S1_Hover));
  }
  if (m.disable_mi) cfg.mi_enabled = false;
  if (m.calibration) cfg.calibration = load_calibration(*m.calibration);
  cfg.validate();
  return cfg;
}

std::vector<std::uint64_t> resolve_seeds(const RunManifest& m, const ScenarioConfig& cfg) {
  if (!m.seeds) return {cfg.seed};
  if (m.seeds->empty()) throw UsageError("no seeds selected");
  return *m.seeds;
}

void write_batch(const fs::path& dir, const BatchResult& batch, const std::string& created_at) {
  for (std::size_t k = 0; k < batch.logs.size(); ++k) {
    const auto& log = batch.logs[k];
    const std::string stem = "trial_" + std::to_string(log.seed);
    std::ostringstream csv;
    write_trial_csv(csv, log);
    write_text_file(dir / (stem + ".csv"), csv.str());
    write_text_file(dir / (stem + ".json"), trial_sidecar_json(log, batch.reports[k]));
  }
  write_text_file(dir / "aggregate.json", batch_to_json(batch.aggregate, created_at));
  std::ostringstream table;
  write_batch_table_csv(table, batch.aggregate);
  write_text_file(dir / "table.csv", table.str());
}

// Maps a error raised before any output is produced to the exit-code contract.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? kExitUsage : kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

using FieldSetter = std::function<void(ScenarioConfig&, double)>;

const std::map<std::string, FieldSetter>& sweep_fields() {
  static const std::map<std::string, FieldSetter> fields{
      {"adc_noise_sigma", [](ScenarioConfig& c, double v) { c.noise.adc_noise_sigma = v; }},
      {"flow_velocity_sigma", [](ScenarioConfig& c, double v) { c.noise.flow_velocity_sigma = v; }},
      {"flow_bias_drift", [](ScenarioConfig& c, double v) { c.noise.flow_bias_drift = v; }},
      {"tof_sigma", [](ScenarioConfig& c, double v) { c.noise.tof_sigma = v; }},
      {"attitude_sigma_deg",
       [](ScenarioConfig& c, double v) { c.noise.attitude_sigma = v * std::numbers::pi / 180.0; }},
      {"initial_simplex_scale", [](ScenarioConfig& c, double v) { c.solver.initial_simplex_scale = v; }},
      {"tol_x", [](ScenarioConfig& c, double v) { c.solver.tol_x = v; }},
      {"tol_f", [](ScenarioConfig& c, double v) { c.solver.tol_f = v; }},
      {"max_iters", [](ScenarioConfig& c, double v) { c.solver.max_iters = static_cast<int>(v); }},
      {"seed_radius", [](ScenarioConfig& c, double v) { c.solver.seed_radius = v; }},
      {"outlier_delta", [](ScenarioConfig& c, double v) { c.solver.outlier_delta = v; }},
  };
  return fields;
}

std::vector<double> parse_values(const std::string& values, const std::string& range) {
  std::vector<double> out;
  auto num = [](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw UsageError("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("invalid number '" + s + "'");
    }
  };
  if (!values.empty()) {
    std::stringstream ss(values);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(num(tok));
  }
  if (!range.empty()) {
    std::stringstream ss(range);
    std::vector<std::string> parts;
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    if (parts.size() != 3) throw UsageError("--range expects lo:hi:count");
    const double lo = num(parts[0]), hi = num(parts[1]);
    const auto n = static_cast<int>(num(parts[2]));
    if (n < 1) throw UsageError("--range count must be >= 1");
    for (int k = 0; k < n; ++k) out.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto a = parse_u64(text.substr(0, dots));
    const auto b = parse_u64(text.substr(dots + 2));
    for (auto s = a; s <= b; ++s) {
      seeds.push_back(s);
      if (s == b) break;
    }
    return seeds;
  }
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) seeds.push_back(parse_u64(tok));
  return seeds;
}

int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load_config(m);
    const auto seeds = resolve_seeds(m, cfg);
    if (m.dry_run) {
      out << "config ok: " << to_string(cfg.kind) << ", " << seeds.size() << " seed(s), duration "
          << cfg.duration << " s, MI " << (cfg.mi_enabled ? "on" : "off") << '\n';
      return kExitOk;
    }
    const BatchResult batch = run_batch(cfg, seeds, m.threads);
    write_batch(m.out_dir, batch, utc_timestamp());
    std::ostringstream table;
    write_batch_table_csv(table, batch.aggregate);
    out << table.str();
    out << "wrote " << batch.logs.size() << " trial log(s) to " << m.out_dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_calibrate(const RunManifest& m, int n_cal, double gain, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = load_config(m);
    if (n_cal < 1) throw UsageError("--n-cal must be >= 1");
    if (!(gain > 0.0)) throw UsageError("--gain must be positive");
    cfg.n_cal = n_cal;
    for (double& g : cfg.hardware_gain) g *= gain;
    cfg.seed = resolve_seeds(m, cfg).front();
    if (m.dry_run) {
      out << "config ok: calibration with " << n_cal << " frame(s)\n";
      return kExitOk;
    }
    CalibrationCoefficients coeffs;
    try {
      coeffs = run_calibration_episode(cfg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CalibrationSaturated) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
      }
      throw;
    }
    const fs::path file = m.out_dir / "calibration.json";
    write_text_file(file, calibration_to_json(coeffs, utc_timestamp()));
    out << std::setprecision(6);
    for (int i = 0; i < kAnchorCount; ++i) out << "C" << i + 1 << " = " << coeffs.c[i] << '\n';
    if (n_cal < kDefaultCalibrationFrames) {
      out << "note: n_cal = " << n_cal << " is below the default of " << kDefaultCalibrationFrames
          << "; coefficient variance is higher\n";
    }
    out << "wrote " << file.string() << '\n';
    return kExitOk;
  });
}

int cmd_sweep(const RunManifest& m, const std::string& parameter, const std::vector<double>& values,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto it = sweep_fields().find(parameter);
    if (it == sweep_fields().end()) throw UsageError("unknown sweep parameter '" + parameter + "'");
    if (values.empty()) throw UsageError("sweep needs at least one value");
    const ScenarioConfig base = load_config(m);
    const auto seeds = resolve_seeds(m, base);
    std::vector<ScenarioConfig> points;
    for (double v : values) {
      ScenarioConfig c = base;
      it->second(c, v);
      c.validate();
      points.push_back(std::move(c));
    }
    if (m.dry_run) {
      out << "config ok: " << values.size() << " point(s) x " << seeds.size() << " seed(s)\n";
      return kExitOk;
    }
    std::ostringstream csv;
    csv << std::setprecision(10);
    csv << "parameter,value,mean_rmse,success_rate,successes,trials\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
      const BatchResult batch = run_batch(points[k], seeds, m.threads);
      csv << parameter << ',' << values[k] << ',' << batch.aggregate.mean_rmse << ','
          << batch.aggregate.success_rate << ',' << batch.aggregate.successes << ','
          << batch.aggregate.trials.size() << '\n';
    }
    write_text_file(m.out_dir / ("sweep_" + parameter + ".csv"), csv.str());
    out << csv.str();
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magneto-inductive docking simulator"};
  app.require_subcommand(1);

  RunManifest m;
  std::string config, out_dir, seeds, scenario, calibration;
  const char* env_out = std::getenv(kOutputRootEnv);
  const std::string default_out = env_out != nullptr && *env_out != '\0' ? env_out : "magdock_out";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario config JSON");
    sub->add_option("--out", out_dir, "Output directory (default $" + std::string(kOutputRootEnv) +
                                          " or ./magdock_out)");
    sub->add_option("--seeds", seeds, "Seeds: a..b, a,b,c or a single value");
    sub->add_option("--scenario", scenario, "Baseline|S1_Hover|S1_InOut|S2_Linear|S3_Composite");
    sub->add_flag("--disable-mi", m.disable_mi, "Flow-only baseline (no MI fixes)");
    sub->add_flag("--dry-run", m.dry_run, "Validate inputs and write nothing");
    sub->add_option("--threads", m.threads, "Worker threads (0 = hardware concurrency)");
    sub->add_option("--calibration", calibration, "Reuse a calibration JSON");
  };

  auto* run = app.add_subcommand("run", "Run a batch of trials");
  common(run);
  auto* cal = app.add_subcommand("calibrate", "Run a static calibration episode");
  common(cal);
  int n_cal = kDefaultCalibrationFrames;
  double gain = 1.0;
  cal->add_option("--n-cal", n_cal, "Frames averaged during calibration");
  cal->add_option("--gain", gain, "Extra receive-chain gain applied to every anchor");
  auto* sweep = app.add_subcommand("sweep", "Grid over one noise or solver parameter");
  common(sweep);
  std::string parameter, values, range;
  sweep->add_option("--param", parameter, "Parameter name")->required();
  sweep->add_option("--values", values, "Comma-separated values");
  sweep->add_option("--range", range, "lo:hi:count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!config.empty()) m.config = config;
    if (!scenario.empty()) m.scenario = scenario;
    if (!calibration.empty()) m.calibration = calibration;
    m.out_dir = out_dir.empty() ? fs::path(default_out) : fs::path(out_dir);
    if (!seeds.empty()) m.seeds = parse_seeds(seeds);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (*run) return cmd_run(m, out, err);
  if (*cal) return cmd_calibrate(m, n_cal, gain, out, err);
  std::vector<double> grid;
  try {
    grid = parse_values(values, range);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return cmd_sweep(m, parameter, grid, out, err);
}

}  // namespace magdock::cli
