#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "magdock/calibration.hpp"
#include "magdock/metrics.hpp"
#include "magdock/simulator.hpp"

namespace magdock {

// Scenario config documents start from the preset named by "scenario" and
// override any field present. Unknown keys are rejected with ConfigError.
// When "duration" is absent it is derived from the mission plan.
ScenarioConfig scenario_from_json(std::string_view text,
                                  std::optional<ScenarioKind> kind_override = std::nullopt);
ScenarioConfig load_scenario_config(const std::filesystem::path& path,
                                    std::optional<ScenarioKind> kind_override = std::nullopt);
std::string scenario_to_json(const ScenarioConfig& cfg);

// Anchor ids are 1-based strings ("1".."4"). created_at goes under "metadata".
std::string calibration_to_json(const CalibrationCoefficients& coeffs,
                                std::string_view created_at = {});
CalibrationCoefficients calibration_from_json(std::string_view text);
CalibrationCoefficients load_calibration(const std::filesystem::path& path);

std::string report_to_json(const TrialReport& report);
std::string batch_to_json(const BatchReport& batch, std::string_view created_at = {});

// Paper-style table: one row per trial, then Mean and SC footers.
void write_batch_table_csv(std::ostream& os, const BatchReport& batch);

// One row per base timestep.
void write_trial_csv(std::ostream& os, const TrialLog& log);
// Events, calibration and the report summary.
std::string trial_sidecar_json(const TrialLog& log, const TrialReport& report);

// Writes text to path atomically via a temporary sibling; throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace magdock
