#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "magdock/geometry.hpp"
#include "magdock/trial_log.hpp"

namespace magdock {

enum class FailureReason { Geofence, Abort };

std::string_view to_string(FailureReason reason);

struct SuccessResult {
  bool success = true;
  std::optional<FailureReason> reason;
};

struct TouchdownResult {
  double planar_distance = 0.0;  // m
  bool inside_pad = false;
};

struct TrialReport {
  std::uint64_t seed = 0;
  ScenarioKind kind = ScenarioKind::S1_Hover;
  double rmse_3d = 0.0;
  Vec3 rmse_axiswise = Vec3::Zero();
  double tracking_rmse = 0.0;  // truth against the mission reference
  bool success = true;
  std::optional<FailureReason> failure_reason;
  std::optional<double> touchdown_error;
  std::optional<bool> touchdown_inside_pad;
  std::size_t samples = 0;
};

struct BatchReport {
  std::vector<TrialReport> trials;
  double mean_rmse = 0.0;  // over successful trials
  double success_rate = 0.0;
  int successes = 0;
  int touchdowns_inside_pad = 0;
};

// Eq-style root mean square of the point-wise Euclidean error.
double rmse_3d(std::span<const Vec3> est, std::span<const Vec3> gt);
Vec3 axiswise_rmse(std::span<const Vec3> est, std::span<const Vec3> gt);

// Failure iff any true-vs-reference error exceeds the geofence or an abort was logged.
SuccessResult classify_success(const TrialLog& log, double geofence = 0.5);

// Planar distance of the true touchdown point from the pad centre; the pad edge
// counts as inside. Throws NotLanded without a touchdown event.
TouchdownResult touchdown_error(const TrialLog& log, const AnchorLayout& layout);

// Airborne samples: takeoff through touchdown (or the last sample).
std::vector<std::size_t> flight_window(const TrialLog& log);

TrialReport evaluate_trial(const TrialLog& log, const AnchorLayout& layout, double geofence = 0.5);
BatchReport aggregate(std::span<const TrialReport> reports);

}  // namespace magdock
