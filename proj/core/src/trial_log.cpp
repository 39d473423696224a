#include "magdock/trial_log.hpp"

#include <array>

namespace magdock {

namespace {
constexpr std::array<std::pair<ScenarioKind, std::string_view>, 5> kKindNames{{
    {ScenarioKind::Baseline, "Baseline"},
    {ScenarioKind::S1_Hover, "S1_Hover"},
    {ScenarioKind::S1_InOut, "S1_InOut"},
    {ScenarioKind::S2_Linear, "S2_Linear"},
    {ScenarioKind::S3_Composite, "S3_Composite"},
}};
}  // namespace

std::string_view to_string(ScenarioKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(MissionPhase phase) {
  switch (phase) {
    case MissionPhase::PreTakeoff: return "pre_takeoff";
    case MissionPhase::Takeoff: return "takeoff";
    case MissionPhase::Task: return "task";
    case MissionPhase::Landing: return "landing";
    case MissionPhase::Landed: return "landed";
  }
  return "unknown";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Calibrated: return "calibrated";
    case EventKind::Takeoff: return "takeoff";
    case EventKind::TaskStart: return "task_start";
    case EventKind::LandingStart: return "landing_start";
    case EventKind::Touchdown: return "touchdown";
    case EventKind::GeofenceBreach: return "geofence_breach";
    case EventKind::Abort: return "abort";
    case EventKind::SaturationFaultStart: return "saturation_fault_start";
    case EventKind::SaturationFaultEnd: return "saturation_fault_end";
    case EventKind::MissionEnd: return "mission_end";
  }
  return "unknown";
}

const TrialEvent* TrialLog::find_event(EventKind kind) const {
  for (const auto& e : events) {
    if (e.kind == kind) return &e;
  }
  return nullptr;
}

}  // namespace magdock
