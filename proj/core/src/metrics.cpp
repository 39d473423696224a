#include "magdock/metrics.hpp"

#include <cmath>
#include <limits>

#include "magdock/errors.hpp"

namespace magdock {

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::Geofence: return "Geofence";
    case FailureReason::Abort: return "Abort";
  }
  return "Unknown";
}

namespace {
void check_series(std::span<const Vec3> est, std::span<const Vec3> gt) {
  if (est.size() != gt.size()) fail(ErrorCode::LengthMismatch, "series lengths differ");
  if (est.empty()) fail(ErrorCode::LengthMismatch, "series must not be empty");
}
}  // namespace

Vec3 axiswise_rmse(std::span<const Vec3> est, std::span<const Vec3> gt) {
  check_series(est, gt);
  Vec3 acc = Vec3::Zero();
  for (std::size_t k = 0; k < est.size(); ++k) acc += (est[k] - gt[k]).cwiseAbs2();
  return (acc / static_cast<double>(est.size())).cwiseSqrt();
}

double rmse_3d(std::span<const Vec3> est, std::span<const Vec3> gt) {
  check_series(est, gt);
  double acc = 0.0;
  for (std::size_t k = 0; k < est.size(); ++k) acc += (est[k] - gt[k]).squaredNorm();
  return std::sqrt(acc / static_cast<double>(est.size()));
}

SuccessResult classify_success(const TrialLog& log, double geofence) {
  double breach_t = std::numeric_limits<double>::infinity();
  for (const auto& s : log.samples) {
    if ((s.uav_B - s.reference_B).norm() > geofence) {
      breach_t = s.t;
      break;
    }
  }
  double abort_t = std::numeric_limits<double>::infinity();
  for (const auto& e : log.events) {
    if (e.kind == EventKind::Abort) abort_t = std::min(abort_t, e.t);
  }
  if (std::isinf(breach_t) && std::isinf(abort_t)) return {};
  return {false, breach_t <= abort_t ? FailureReason::Geofence : FailureReason::Abort};
}

TouchdownResult touchdown_error(const TrialLog& log, const AnchorLayout& layout) {
  const TrialEvent* td = log.find_event(EventKind::Touchdown);
  if (td == nullptr) fail(ErrorCode::NotLanded, "trial has no touchdown event");
  const Eigen::Vector2d d = td->position_B.head<2>() - layout.pad_center_B.head<2>();
  const double dist = d.norm();
  return {dist, dist <= layout.pad_radius};
}

std::vector<std::size_t> flight_window(const TrialLog& log) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < log.samples.size(); ++k) {
    const auto phase = log.samples[k].phase;
    if (phase == MissionPhase::Takeoff || phase == MissionPhase::Task ||
        phase == MissionPhase::Landing) {
      idx.push_back(k);
    } else if (phase == MissionPhase::Landed && !idx.empty()) {
      idx.push_back(k);  // the touchdown sample closes the window
      break;
    }
  }
  return idx;
}

TrialReport evaluate_trial(const TrialLog& log, const AnchorLayout& layout, double geofence) {
  TrialReport r;
  r.seed = log.seed;
  r.kind = log.kind;
  const auto idx = flight_window(log);
  r.samples = idx.size();
  if (!idx.empty()) {
    std::vector<Vec3> est, gt, ref;
    est.reserve(idx.size());
    gt.reserve(idx.size());
    ref.reserve(idx.size());
    for (auto k : idx) {
      est.push_back(log.samples[k].ekf_position);
      gt.push_back(log.samples[k].uav_B);
      ref.push_back(log.samples[k].reference_B);
    }
    r.rmse_3d = rmse_3d(est, gt);
    r.rmse_axiswise = axiswise_rmse(est, gt);
    r.tracking_rmse = rmse_3d(gt, ref);
  }
  const auto sr = classify_success(log, geofence);
  r.success = sr.success;
  r.failure_reason = sr.reason;
  if (log.find_event(EventKind::Touchdown) != nullptr) {
    const auto td = touchdown_error(log, layout);
    r.touchdown_error = td.planar_distance;
    r.touchdown_inside_pad = td.inside_pad;
  }
  return r;
}

BatchReport aggregate(std::span<const TrialReport> reports) {
  BatchReport b;
  b.trials.assign(reports.begin(), reports.end());
  if (reports.empty()) return b;
  double sum = 0.0;
  for (const auto& r : reports) {
    if (r.success) {
      ++b.successes;
      sum += r.rmse_3d;
    }
    if (r.touchdown_inside_pad.value_or(false)) ++b.touchdowns_inside_pad;
  }
  b.mean_rmse = b.successes > 0 ? sum / b.successes : 0.0;
  b.success_rate = static_cast<double>(b.successes) / static_cast<double>(reports.size());
  return b;
}

}  // namespace magdock
