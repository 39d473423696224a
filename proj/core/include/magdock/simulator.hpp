#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "magdock/calibration.hpp"
#include "magdock/fusion.hpp"
#include "magdock/metrics.hpp"
#include "magdock/solver.hpp"
#include "magdock/system.hpp"
#include "magdock/trial_log.hpp"

namespace magdock {

struct NoiseConfig {
  double adc_noise_sigma = 0.0;      // V per sample at the ADC input
  double flow_velocity_sigma = 0.0;  // m/s
  double flow_bias_drift = 0.0;      // m/s per sqrt(s), horizontal random walk
  double tof_sigma = 0.0;            // m
  double attitude_sigma = 0.0;       // rad, roll/pitch estimate error

  // Values used for the reported batch results; see README for the procedure.
  static NoiseConfig calibrated();
  static NoiseConfig noiseless() { return {}; }
  void validate() const;
};

struct UgvWaypoint {
  double t = 0.0;  // s
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;  // rad
};

struct MissionLeg {
  Vec3 target_B = Vec3::Zero();
  double speed = 0.2;  // m/s along the leg
  double dwell = 0.0;  // s held at the target
  bool landing = false;
};

struct SaturationFault {
  int anchor = 0;  // zero-based
  double start = 0.0;
  double duration = 0.0;
  double amplitude = 1.45;  // V forced at the ADC input
};

struct ControllerLimits {
  double kp = 2.5;      // 1/s
  double kd = 0.2247;   // unitless, on velocity error
  double max_horizontal_speed = 0.5;  // m/s
  double max_vertical_speed = 0.3;    // m/s
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::S1_Hover;
  double duration = 40.0;  // s, hard cap on simulated time
  std::vector<UgvWaypoint> ugv_path{UgvWaypoint{}};
  std::vector<MissionLeg> setpoints;
  NoiseConfig noise{};
  std::uint64_t seed = 1;

  bool mi_enabled = true;
  MiSystem system{};
  SolverOptions solver{};
  EkfConfig ekf{};
  ControllerLimits controller{};

  double takeoff_delay = 1.0;        // s on the pad before lift-off
  double deck_height = 0.25;         // m, pad plane above the floor
  double uav_time_constant = 0.15;   // s, first-order velocity response
  double tof_step_threshold = 2.0;   // m/s
  double geofence = 0.5;             // m
  double signal_loss_timeout = 3.0;  // s airborne without an accepted MI fix
  double divergence_trace = 25.0;    // m^2, position covariance trace limit

  int n_cal = kDefaultCalibrationFrames;
  std::optional<CalibrationCoefficients> calibration;  // skip the calibration episode
  std::array<double, kAnchorCount> hardware_gain{1.0, 1.0, 1.0, 1.0};  // unmodelled chain gain
  std::optional<SaturationFault> saturation_fault;

  static ScenarioConfig preset(ScenarioKind kind, std::uint64_t seed = 1);
  void validate() const;
};

// Ground-truth UGV pose in {W}: C1 cubic Hermite through the timed waypoints.
// Throws OutOfRange outside [0, duration].
Pose ugv_pose_at(const ScenarioConfig& cfg, double t);

struct ReferencePoint {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  MissionPhase phase = MissionPhase::PreTakeoff;
};

// Mission reference in {B} at time t (takeoff starts at cfg.takeoff_delay).
ReferencePoint mission_reference(const ScenarioConfig& cfg, double t);

// Nominal end of the mission plan, excluding the touchdown transient.
double mission_length(const ScenarioConfig& cfg);

// PD velocity command toward the setpoint, saturated per axis group.
Vec3 uav_controller(const EkfState& est, const Vec3& setpoint_B, const ControllerLimits& limits,
                    const Vec3& reference_velocity_B = Vec3::Zero());

// Static calibration episode: n_cal frames with the UAV resting at the pad origin.
CalibrationCoefficients run_calibration_episode(const ScenarioConfig& cfg);

TrialLog run_trial(const ScenarioConfig& cfg);

struct BatchResult {
  std::vector<TrialLog> logs;
  std::vector<TrialReport> reports;
  BatchReport aggregate;
};

// Independent trials, one per seed; executed concurrently, returned in seed order.
BatchResult run_batch(const ScenarioConfig& base, std::span<const std::uint64_t> seeds,
                      int max_threads = 0);
BatchResult run_batch(std::span<const ScenarioConfig> cfgs, int max_threads = 0);

}  // namespace magdock
