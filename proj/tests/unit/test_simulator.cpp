#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "magdock/errors.hpp"
#include "magdock/metrics.hpp"
#include "magdock/simulator.hpp"

namespace magdock {
namespace {

ScenarioConfig noiseless(ScenarioKind kind, std::uint64_t seed = 1) {
  auto cfg = ScenarioConfig::preset(kind, seed);
  cfg.noise = NoiseConfig::noiseless();
  return cfg;
}

TEST(UgvPose, StationaryForS1) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S1_Hover);
  for (double t : {0.0, 1.0, 7.5, cfg.duration}) {
    const Pose p = ugv_pose_at(cfg, t);
    EXPECT_NEAR(p.position.norm(), 0.0, 1e-15);
    EXPECT_NEAR(p.yaw(), 0.0, 1e-15);
  }
}

TEST(UgvPose, S2PeaksAtHalfPeriod) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S2_Linear);
  EXPECT_NEAR(ugv_pose_at(cfg, 2.5).position.x(), 0.5, 1e-12);
  EXPECT_NEAR(ugv_pose_at(cfg, 0.0).position.x(), 0.0, 1e-12);
  EXPECT_NEAR(ugv_pose_at(cfg, 5.0).position.x(), 0.0, 1e-12);
  double peak = 0.0;
  for (double t = 0.0; t <= 5.0; t += 0.01) peak = std::max(peak, ugv_pose_at(cfg, t).position.x());
  EXPECT_NEAR(peak, 0.5, 1e-9);
}

TEST(UgvPose, S3HitsWaypoints) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S3_Composite);
  for (const auto& w : cfg.ugv_path) {
    const Pose p = ugv_pose_at(cfg, w.t);
    EXPECT_NEAR(p.position.x(), w.x, 1e-12);
    EXPECT_NEAR(p.position.y(), w.y, 1e-12);
    EXPECT_NEAR(p.yaw(), w.yaw, 1e-12);
  }
}

TEST(UgvPose, OutOfRange) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S2_Linear);
  for (double t : {-0.01, cfg.duration + 1.0}) {
    try {
      ugv_pose_at(cfg, t);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
  }
}

TEST(UgvPose, ContinuousProperty) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S3_Composite);
  Pose prev = ugv_pose_at(cfg, 0.0);
  for (double t = 0.01; t <= 24.0; t += 0.01) {
    const Pose p = ugv_pose_at(cfg, t);
    EXPECT_LT((p.position - prev.position).norm(), 0.01);
    EXPECT_LT(std::abs(p.yaw() - prev.yaw()), 0.01);
    prev = p;
  }
}

TEST(ScenarioConfig, PresetsValidate) {
  for (auto k : {ScenarioKind::Baseline, ScenarioKind::S1_Hover, ScenarioKind::S1_InOut,
                 ScenarioKind::S2_Linear, ScenarioKind::S3_Composite}) {
    EXPECT_NO_THROW(ScenarioConfig::preset(k).validate()) << to_string(k);
  }
}

TEST(ScenarioConfig, RejectsMovingUgvInS1) {
  auto cfg = ScenarioConfig::preset(ScenarioKind::S1_Hover);
  cfg.ugv_path.push_back({5.0, 0.3, 0.0, 0.0});
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(ScenarioConfig, RejectsLargeHeadingStepInS3) {
  auto cfg = ScenarioConfig::preset(ScenarioKind::S3_Composite);
  cfg.ugv_path.push_back({30.0, 2.8, 0.8, 0.6});
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Controller, ZeroErrorZeroCommand) {
  EkfState s = EkfState::at(Vec3(0.1, 0.2, 0.3), 0.01, 0.01);
  EXPECT_NEAR(uav_controller(s, s.position, ControllerLimits{}).norm(), 0.0, 1e-15);
}

TEST(Controller, SaturatesHorizontalSpeed) {
  ControllerLimits lim;
  lim.kp = 1.5;
  lim.kd = 0.0;
  const Vec3 cmd = uav_controller(EkfState{}, Vec3(1.0, 0, 0), lim);
  EXPECT_NEAR(cmd.x(), 0.5, 1e-12);
  const Vec3 diag = uav_controller(EkfState{}, Vec3(1.0, 1.0, 0), lim);
  EXPECT_NEAR(diag.head<2>().norm(), 0.5, 1e-12);
  const Vec3 up = uav_controller(EkfState{}, Vec3(0, 0, 1.0), lim);
  EXPECT_NEAR(up.z(), 0.3, 1e-12);
}

TEST(Controller, StepResponseOvershootIsSmall) {
  // Closed loop with the first-order vehicle response.
  const ControllerLimits lim;
  const double tau = 0.15, dt = 0.001;
  EkfState s;
  double peak = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Vec3 cmd = uav_controller(s, Vec3(0.1, 0, 0), lim);
    s.velocity += (cmd - s.velocity) * dt / tau;
    s.position += s.velocity * dt;
    peak = std::max(peak, s.position.x());
  }
  EXPECT_NEAR(s.position.x(), 0.1, 1e-6);
  EXPECT_LE(peak, 0.1 * 1.05);
}

TEST(MissionReference, PhasesInOrder) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S1_InOut);
  EXPECT_EQ(mission_reference(cfg, 0.0).phase, MissionPhase::PreTakeoff);
  EXPECT_EQ(mission_reference(cfg, cfg.takeoff_delay + 0.5).phase, MissionPhase::Takeoff);
  const double end = cfg.takeoff_delay + mission_length(cfg);
  EXPECT_EQ(mission_reference(cfg, end - 0.1).phase, MissionPhase::Landing);
  int order = 0;
  for (double t = 0.0; t < end; t += 0.01) {
    const int p = static_cast<int>(mission_reference(cfg, t).phase);
    EXPECT_GE(p, order);
    order = p;
  }
}

TEST(CalibrationEpisode, AbsorbsHardwareGain) {
  auto cfg = noiseless(ScenarioKind::S1_Hover);
  cfg.hardware_gain = {1.0, 0.8, 1.2, 1.0};
  const auto c = run_calibration_episode(cfg);
  EXPECT_NEAR(c.c[0], 1.0, 2e-3);
  EXPECT_NEAR(c.c[1], 0.8, 2e-3);
  EXPECT_NEAR(c.c[2], 1.2, 2e-3);
  EXPECT_EQ(c.n_cal, cfg.n_cal);
}

TEST(Trial, NoiselessHoverLandsOnTarget) {
  const auto log = run_trial(noiseless(ScenarioKind::S1_Hover));
  const auto report = evaluate_trial(log, AnchorLayout::standard());
  EXPECT_TRUE(report.success);
  ASSERT_TRUE(report.touchdown_error.has_value());
  EXPECT_LT(*report.touchdown_error, 0.01);
  EXPECT_LT(report.rmse_3d, 0.01);
}

TEST(Trial, FlowOnlyInOutBreachesGeofence) {
  auto cfg = ScenarioConfig::preset(ScenarioKind::S1_InOut, 3);
  cfg.mi_enabled = false;
  const auto report = evaluate_trial(run_trial(cfg), cfg.system.layout, cfg.geofence);
  EXPECT_FALSE(report.success);
  ASSERT_TRUE(report.failure_reason.has_value());
  EXPECT_EQ(*report.failure_reason, FailureReason::Geofence);
}

TEST(Trial, DeterministicPerSeedProperty) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S2_Linear, 7);
  const auto a = run_trial(cfg);
  const auto b = run_trial(cfg);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    ASSERT_EQ(a.samples[k].uav_B, b.samples[k].uav_B);
    ASSERT_EQ(a.samples[k].ekf_position, b.samples[k].ekf_position);
  }
  EXPECT_EQ(a.events.size(), b.events.size());
  const auto c = run_trial(ScenarioConfig::preset(ScenarioKind::S2_Linear, 8));
  EXPECT_NE(a.samples.back().ekf_position, c.samples.back().ekf_position);
}

TEST(Trial, TruthVoltagesMatchForwardModelProperty) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S3_Composite, 2);
  const auto log = run_trial(cfg);
  const auto& sys = cfg.system;
  int checked = 0;
  for (const auto& s : log.samples) {
    if (!s.mi_truth_voltages) continue;
    const Quat q_rel = s.ugv_W.orientation.conjugate() * s.uav_W.orientation;
    const Vec3 n_B = (q_rel * sys.rx_normal_T).normalized();
    const auto v = forward_voltages_checked(s.uav_B, n_B, sys.layout, sys.rx_coil, sys.chain);
    for (int i = 0; i < kAnchorCount; ++i) {
      if (!v[i]) continue;
      ASSERT_NEAR((*s.mi_truth_voltages)[i], *v[i], 1e-9 * std::max(1.0, *v[i]));
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Trial, TouchdownIsLastSampleAndOnDeck) {
  const auto log = run_trial(noiseless(ScenarioKind::S1_Hover));
  const auto* td = log.find_event(EventKind::Touchdown);
  ASSERT_NE(td, nullptr);
  EXPECT_EQ(log.samples.back().phase, MissionPhase::Landed);
  EXPECT_NEAR(log.samples.back().uav_B.z(), 0.0, 1e-12);
  EXPECT_NEAR(td->position_B.z(), 0.0, 1e-12);
  EXPECT_NE(log.find_event(EventKind::MissionEnd), nullptr);
}

TEST(Batch, EmptySeedListGivesEmptyBatch) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S1_Hover);
  const auto res = run_batch(cfg, std::span<const std::uint64_t>{});
  EXPECT_TRUE(res.logs.empty());
  EXPECT_TRUE(res.aggregate.trials.empty());
}

TEST(Batch, MatchesSequentialRunsInSeedOrder) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S1_Hover);
  const std::vector<std::uint64_t> seeds{4, 4, 2};
  const auto res = run_batch(cfg, seeds, 3);
  ASSERT_EQ(res.reports.size(), 3u);
  EXPECT_EQ(res.reports[0].rmse_3d, res.reports[1].rmse_3d);
  auto single = cfg;
  single.seed = 2;
  const auto rep = evaluate_trial(run_trial(single), cfg.system.layout, cfg.geofence);
  EXPECT_EQ(res.reports[2].seed, 2u);
  EXPECT_EQ(res.reports[2].rmse_3d, rep.rmse_3d);
}

}  // namespace
}  // namespace magdock
