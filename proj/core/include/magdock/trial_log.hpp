#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magdock/calibration.hpp"
#include "magdock/fusion.hpp"
#include "magdock/geometry.hpp"
#include "magdock/solver.hpp"

namespace magdock {

enum class ScenarioKind { Baseline, S1_Hover, S1_InOut, S2_Linear, S3_Composite };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name);

enum class MissionPhase { PreTakeoff, Takeoff, Task, Landing, Landed };

std::string_view to_string(MissionPhase phase);

enum class EventKind {
  Calibrated,
  Takeoff,
  TaskStart,
  LandingStart,
  Touchdown,
  GeofenceBreach,
  Abort,
  SaturationFaultStart,
  SaturationFaultEnd,
  MissionEnd,
};

std::string_view to_string(EventKind kind);

struct TrialEvent {
  double t = 0.0;
  EventKind kind = EventKind::MissionEnd;
  std::string detail;
  Vec3 position_B = Vec3::Zero();  // true UAV position in {B} when the event fired
};

// One row per base timestep.
struct TrialSample {
  double t = 0.0;
  MissionPhase phase = MissionPhase::PreTakeoff;
  Pose uav_W{};
  Pose ugv_W{};
  Vec3 uav_B = Vec3::Zero();  // truth, relative to the UGV
  Vec3 reference_B = Vec3::Zero();
  Vec3 ekf_position = Vec3::Zero();
  Vec3 ekf_velocity = Vec3::Zero();
  double ekf_position_trace = 0.0;
  Vec3 command_B = Vec3::Zero();
  double tof_raw = 0.0;
  double tof_altitude = 0.0;
  TofMode tof_mode = TofMode::Nominal;
  bool tof_updated = false;
  bool descending = false;
  // Present on MI cycles only.
  std::optional<MiEstimate> mi;
  std::optional<AnchorVoltages> mi_truth_voltages;  // noiseless model at the true pose
};

struct TrialLog {
  ScenarioKind kind = ScenarioKind::S1_Hover;
  std::uint64_t seed = 0;
  double dt = 0.01;
  double duration = 0.0;
  bool mi_enabled = true;
  CalibrationCoefficients calibration{};
  std::vector<TrialSample> samples;
  std::vector<TrialEvent> events;

  const TrialEvent* find_event(EventKind kind) const;
};

}  // namespace magdock
