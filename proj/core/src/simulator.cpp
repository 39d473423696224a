#include "magdock/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "magdock/errors.hpp"

namespace magdock {

namespace {

constexpr double kGravity = 9.80665;
constexpr double kBaseDt = 0.01;  // truth, EKF and controller
constexpr int kMiDecimation = 5;  // 20 Hz
constexpr int kTofDecimation = 2;  // 50 Hz
constexpr double kMinFlowRange = 0.05;  // m

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double deg(double d) { return d * std::numbers::pi / 180.0; }

struct Hermite {
  double p0, p1, m0, m1, h;
  double value(double s) const {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * p1 +
           (s3 - s2) * h * m1;
  }
};

// Catmull-Rom style tangent for knot k (zero at the ends).
double knot_tangent(const std::vector<UgvWaypoint>& path, std::size_t k, double UgvWaypoint::*f) {
  if (k == 0 || k + 1 >= path.size()) return 0.0;
  const double dt = path[k + 1].t - path[k - 1].t;
  return (path[k + 1].*f - path[k - 1].*f) / dt;
}

double ground_height(const ScenarioConfig& cfg, const Vec3& x_B) {
  const auto& layout = cfg.system.layout;
  const Vec3 d = x_B - layout.pad_center_B;
  const bool over_deck =
      std::abs(d.x()) <= layout.pad_length / 2.0 && std::abs(d.y()) <= layout.pad_width / 2.0;
  return over_deck ? 0.0 : -cfg.deck_height;
}

// Attitude of a multirotor producing acceleration accel_W with the given heading.
Mat3 attitude_from_accel(const Vec3& accel_W, double yaw) {
  Vec3 z_b = accel_W + Vec3(0.0, 0.0, kGravity);
  z_b.normalize();
  const Vec3 x_c(std::cos(yaw), std::sin(yaw), 0.0);
  Vec3 y_b = z_b.cross(x_c).normalized();
  Vec3 x_b = y_b.cross(z_b);
  Mat3 r;
  r.col(0) = x_b;
  r.col(1) = y_b;
  r.col(2) = z_b;
  return r;
}

Mat3 small_tilt(double roll, double pitch) {
  return (Eigen::AngleAxisd(pitch, Vec3::UnitY()) * Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

struct LegTiming {
  Vec3 from, to;
  double start, travel_end, end;
  bool landing;
  bool first;
};

std::vector<LegTiming> plan_legs(const ScenarioConfig& cfg) {
  std::vector<LegTiming> legs;
  Vec3 from = cfg.system.layout.pad_center_B;
  double t = cfg.takeoff_delay;
  for (std::size_t k = 0; k < cfg.setpoints.size(); ++k) {
    const auto& leg = cfg.setpoints[k];
    const double travel = (leg.target_B - from).norm() / leg.speed;
    legs.push_back({from, leg.target_B, t, t + travel, t + travel + leg.dwell, leg.landing, k == 0});
    t += travel + leg.dwell;
    from = leg.target_B;
  }
  return legs;
}

Vec3 ugv_velocity(const ScenarioConfig& cfg, double t, double* yaw_rate) {
  const double h = 1e-4;
  const double ta = std::max(0.0, t - h);
  const double tb = std::min(cfg.duration, t + h);
  const Pose a = ugv_pose_at(cfg, ta);
  const Pose b = ugv_pose_at(cfg, tb);
  if (yaw_rate != nullptr) {
    double dy = b.yaw() - a.yaw();
    dy = std::remainder(dy, 2.0 * std::numbers::pi);
    *yaw_rate = dy / (tb - ta);
  }
  return (b.position - a.position) / (tb - ta);
}

}  // namespace

NoiseConfig NoiseConfig::calibrated() {
  // Chosen by sweeping against the hover and in-out batches (see README).
  NoiseConfig n;
  n.adc_noise_sigma = 0.025;
  n.flow_velocity_sigma = 0.05;
  n.flow_bias_drift = 0.01;
  n.tof_sigma = 0.005;
  n.attitude_sigma = deg(6.0);
  return n;
}

void NoiseConfig::validate() const {
  for (double v : {adc_noise_sigma, flow_velocity_sigma, flow_bias_drift, tof_sigma, attitude_sigma}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::ConfigError, "noise parameters must be >= 0");
  }
}

ScenarioConfig ScenarioConfig::preset(ScenarioKind kind, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.seed = seed;
  cfg.noise = NoiseConfig::calibrated();
  const Vec3 hover(0.0, 0.0, 0.45);
  const MissionLeg land{Vec3(0.0, 0.0, -0.05), 0.15, 0.0, true};
  cfg.ugv_path = {UgvWaypoint{}};

  switch (kind) {
    case ScenarioKind::Baseline:
      cfg.mi_enabled = false;
      cfg.setpoints = {{hover, 0.2, 8.0, false}, land};
      break;
    case ScenarioKind::S1_Hover:
      cfg.setpoints = {{hover, 0.2, 8.0, false}, land};
      break;
    case ScenarioKind::S1_InOut:
      cfg.setpoints = {{hover, 0.2, 2.0, false},
                       {Vec3(0.6, 0.0, 0.45), 0.2, 3.0, false},
                       {hover, 0.2, 3.0, false},
                       land};
      break;
    case ScenarioKind::S2_Linear: {
      cfg.setpoints = {{hover, 0.2, 12.0, false}, land};
      // Forward to +0.5 m and back, 0.2 m/s mean speed.
      const double amplitude = 0.5;
      const double half_period = amplitude / 0.2;
      cfg.ugv_path.clear();
      for (int k = 0; k <= 14; ++k) {
        cfg.ugv_path.push_back({k * half_period, (k % 2 == 1) ? amplitude : 0.0, 0.0, 0.0});
      }
      break;
    }
    case ScenarioKind::S3_Composite:
      cfg.setpoints = {{hover, 0.2, 22.0, false}, land};
      cfg.ugv_path = {
          {0.0, 0.0, 0.0, 0.0},          {4.0, 0.0, 0.0, 0.0},
          {8.0, 0.8, 0.0, 0.0},          {11.0, 1.4, 0.2, deg(18.0)},
          {15.0, 1.9, 0.55, deg(36.0)},  {18.0, 2.4, 0.75, deg(20.0)},
          {21.0, 2.8, 0.8, deg(5.0)},    {24.0, 2.8, 0.8, deg(5.0)},
      };
      break;
  }
  cfg.duration = std::max(cfg.takeoff_delay + mission_length(cfg) + 8.0, cfg.ugv_path.back().t);
  return cfg;
}

double mission_length(const ScenarioConfig& cfg) {
  const auto legs = plan_legs(cfg);
  return legs.empty() ? 0.0 : legs.back().end - cfg.takeoff_delay;
}

void ScenarioConfig::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorCode::ConfigError, msg); };
  if (!(duration > 0.0)) bad("duration must be positive");
  if (ugv_path.empty()) bad("ugv_path needs at least one waypoint");
  for (std::size_t k = 1; k < ugv_path.size(); ++k) {
    if (!(ugv_path[k].t > ugv_path[k - 1].t)) bad("ugv_path times must increase");
    if (kind == ScenarioKind::S3_Composite &&
        std::abs(ugv_path[k].yaw - ugv_path[k - 1].yaw) > deg(20.0) + 1e-9) {
      bad("S3 heading steps must stay within 20 degrees");
    }
  }
  if ((kind == ScenarioKind::S1_Hover || kind == ScenarioKind::S1_InOut ||
       kind == ScenarioKind::Baseline)) {
    for (const auto& w : ugv_path) {
      if (w.x != ugv_path.front().x || w.y != ugv_path.front().y || w.yaw != ugv_path.front().yaw) {
        bad("S1 scenarios require a stationary UGV");
      }
    }
  }
  if (setpoints.empty()) bad("mission needs at least one setpoint");
  for (const auto& leg : setpoints) {
    if (!(leg.speed > 0.0) || !(leg.dwell >= 0.0) || !leg.target_B.allFinite()) {
      bad("mission legs need positive speed and non-negative dwell");
    }
  }
  noise.validate();
  system.validate();
  solver.validate();
  ekf.validate();
  if (!(takeoff_delay >= 0.0) || !(deck_height >= 0.0) || !(uav_time_constant > 0.0) ||
      !(tof_step_threshold > 0.0) || !(geofence > 0.0) || !(signal_loss_timeout > 0.0) ||
      !(divergence_trace > 0.0)) {
    bad("timing and threshold parameters must be positive");
  }
  if (n_cal < 1) bad("n_cal must be >= 1");
  for (double g : hardware_gain) {
    if (!(g > 0.0)) bad("hardware gain must be positive");
  }
  if (calibration) calibration->validate();
  if (saturation_fault) {
    const auto& f = *saturation_fault;
    if (f.anchor < 0 || f.anchor >= kAnchorCount || !(f.duration > 0.0) || !(f.amplitude > 0.0)) {
      bad("invalid saturation fault");
    }
  }
}

Pose ugv_pose_at(const ScenarioConfig& cfg, double t) {
  if (!(t >= 0.0) || t > cfg.duration + 1e-9) {
    std::ostringstream os;
    os << "t = " << t << " s outside [0, " << cfg.duration << "]";
    fail(ErrorCode::OutOfRange, os.str());
  }
  const auto& path = cfg.ugv_path;
  if (path.empty()) fail(ErrorCode::ConfigError, "empty ugv_path");
  auto pose_of = [](double x, double y, double yaw) {
    return Pose::from_euler(Vec3(x, y, 0.0), 0.0, 0.0, yaw);
  };
  if (path.size() == 1 || t <= path.front().t) {
    return pose_of(path.front().x, path.front().y, path.front().yaw);
  }
  if (t >= path.back().t) return pose_of(path.back().x, path.back().y, path.back().yaw);

  const auto it = std::upper_bound(path.begin(), path.end(), t,
                                   [](double v, const UgvWaypoint& w) { return v < w.t; });
  const std::size_t k1 = static_cast<std::size_t>(it - path.begin());
  const std::size_t k0 = k1 - 1;
  const double h = path[k1].t - path[k0].t;
  const double s = (t - path[k0].t) / h;
  auto interp = [&](double UgvWaypoint::*f) {
    return Hermite{path[k0].*f, path[k1].*f, knot_tangent(path, k0, f), knot_tangent(path, k1, f), h}
        .value(s);
  };
  return pose_of(interp(&UgvWaypoint::x), interp(&UgvWaypoint::y), interp(&UgvWaypoint::yaw));
}

ReferencePoint mission_reference(const ScenarioConfig& cfg, double t) {
  ReferencePoint ref;
  const auto legs = plan_legs(cfg);
  ref.position = cfg.system.layout.pad_center_B;
  if (t < cfg.takeoff_delay || legs.empty()) return ref;
  for (const auto& leg : legs) {
    if (t >= leg.end) continue;
    if (t < leg.travel_end) {
      const double span = leg.travel_end - leg.start;
      const double s = span > 0.0 ? (t - leg.start) / span : 1.0;
      ref.position = leg.from + s * (leg.to - leg.from);
      ref.velocity = span > 0.0 ? Vec3((leg.to - leg.from) / span) : Vec3::Zero();
    } else {
      ref.position = leg.to;
    }
    ref.phase = leg.landing ? MissionPhase::Landing
                            : (leg.first && t < leg.travel_end ? MissionPhase::Takeoff
                                                               : MissionPhase::Task);
    return ref;
  }
  const auto& last = legs.back();
  ref.position = last.to;
  ref.phase = last.landing ? MissionPhase::Landing : MissionPhase::Task;
  if (last.landing) {
    // Keep sinking until contact, wherever the surface turns out to be.
    const double speed = cfg.setpoints.back().speed;
    ref.position.z() -= speed * (t - last.end);
    ref.velocity = Vec3(0.0, 0.0, -speed);
  }
  return ref;
}

Vec3 uav_controller(const EkfState& est, const Vec3& setpoint_B, const ControllerLimits& limits,
                    const Vec3& reference_velocity_B) {
  Vec3 cmd = reference_velocity_B + limits.kp * (setpoint_B - est.position) +
             limits.kd * (reference_velocity_B - est.velocity);
  const double h = cmd.head<2>().norm();
  if (h > limits.max_horizontal_speed) cmd.head<2>() *= limits.max_horizontal_speed / h;
  cmd.z() = std::clamp(cmd.z(), -limits.max_vertical_speed, limits.max_vertical_speed);
  return cmd;
}

CalibrationCoefficients run_calibration_episode(const ScenarioConfig& cfg) {
  const MiSystem& sys = cfg.system;
  const Vec3 x_ref = sys.layout.pad_center_B;
  const Pose level{};
  const Vec3 n_B = receiver_normal_in_B(level, sys.rx_normal_T);
  const auto v = forward_voltages(x_ref, n_B, sys.layout, sys.rx_coil, sys.chain);
  ToneArray amps{};
  for (int i = 0; i < kAnchorCount; ++i) amps[i] = v[i] * cfg.hardware_gain[i];

  std::mt19937_64 rng(splitmix64(cfg.seed ^ 0xCA11B7A7E0ULL));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double frame_period = static_cast<double>(sys.adc.frame_length) / sys.adc.sample_rate;
  std::vector<SampleFrame> frames;
  frames.reserve(static_cast<std::size_t>(cfg.n_cal));
  for (int k = 0; k < cfg.n_cal; ++k) {
    ToneArray ph{};
    for (double& p : ph) p = phase(rng);
    frames.push_back(synthesize_frame(amps, sys.layout.frequencies(), ph, sys.adc,
                                      cfg.noise.adc_noise_sigma, rng(), k * frame_period));
  }
  return calibrate(frames, x_ref, level, sys.layout, sys.rx_coil, sys.chain, sys.adc,
                   sys.v_sat_thresh, sys.rx_normal_T);
}

TrialLog run_trial(const ScenarioConfig& cfg) {
  cfg.validate();
  const MiSystem& sys = cfg.system;
  const auto freqs = sys.layout.frequencies();

  TrialLog log;
  log.kind = cfg.kind;
  log.seed = cfg.seed;
  log.dt = kBaseDt;
  log.duration = cfg.duration;
  log.mi_enabled = cfg.mi_enabled;

  if (cfg.mi_enabled) {
    log.calibration = cfg.calibration ? *cfg.calibration : run_calibration_episode(cfg);
    log.events.push_back({0.0, EventKind::Calibrated, "", sys.layout.pad_center_B});
  } else {
    log.calibration.reference_pose = Pose::from_translation(sys.layout.pad_center_B);
  }

  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> random_phase(0.0, 2.0 * std::numbers::pi);

  // Truth state.
  const Pose ugv0 = ugv_pose_at(cfg, 0.0);
  Vec3 landed_offset_B = sys.layout.pad_center_B;
  Vec3 p_W = transform_point(ugv0, landed_offset_B);
  Vec3 v_W = Vec3::Zero();
  Vec3 accel_W = Vec3::Zero();
  bool airborne = false;
  bool touched_down = false;

  // Estimation state.
  FusionFilter ekf(EkfState::at(log.calibration.reference_pose.position, 0.01, 0.01), cfg.ekf, 0.0);
  TofFilterState tof;
  tof.step_threshold = cfg.tof_step_threshold;
  Eigen::Vector2d flow_bias = Eigen::Vector2d::Zero();
  int rejections = 0;
  double last_fix_t = 0.0;
  Vec3 command_B = Vec3::Zero();
  MissionPhase last_phase = MissionPhase::PreTakeoff;
  bool fault_active = false;

  const int total_steps = static_cast<int>(std::floor(cfg.duration / kBaseDt + 1e-9));
  log.samples.reserve(static_cast<std::size_t>(total_steps) + 1);

  auto end_trial = [&](double t, EventKind kind, const std::string& detail, const Vec3& x_B) {
    log.events.push_back({t, kind, detail, x_B});
  };

  for (int step = 0; step <= total_steps; ++step) {
    const double t = step * kBaseDt;
    const Pose ugv = ugv_pose_at(cfg, t);
    const Mat3 r_WB = ugv.rotation();
    double yaw_rate = 0.0;
    const Vec3 v_ugv = ugv_velocity(cfg, t, &yaw_rate);

    if (!airborne && !touched_down) {
      p_W = transform_point(ugv, landed_offset_B);
      v_W = v_ugv + Vec3(0.0, 0.0, yaw_rate).cross(p_W - ugv.position);
      accel_W.setZero();
    }
    const Vec3 x_B = r_WB.transpose() * (p_W - ugv.position);
    const ReferencePoint ref = mission_reference(cfg, t);

    if (!airborne && !touched_down && t >= cfg.takeoff_delay) {
      airborne = true;
      log.events.push_back({t, EventKind::Takeoff, "", x_B});
    }
    MissionPhase phase = airborne ? ref.phase : (touched_down ? MissionPhase::Landed
                                                              : MissionPhase::PreTakeoff);
    if (airborne && phase != last_phase) {
      if (phase == MissionPhase::Task) log.events.push_back({t, EventKind::TaskStart, "", x_B});
      if (phase == MissionPhase::Landing) log.events.push_back({t, EventKind::LandingStart, "", x_B});
    }
    last_phase = phase;

    const Mat3 r_WT = airborne ? attitude_from_accel(accel_W, ugv.yaw()) : r_WB;
    const Mat3 r_BT = r_WB.transpose() * r_WT;

    TrialSample sample;
    sample.t = t;
    sample.phase = phase;
    sample.ugv_W = ugv;
    sample.uav_W = Pose{p_W, Quat(r_WT).normalized()};
    sample.uav_B = x_B;
    sample.reference_B = ref.position;

    try {
      // Optical flow: motion relative to the surface underneath.
      const double ground = ground_height(cfg, x_B);
      Vec3 v_flow_W = v_W;
      if (ground == 0.0) {
        v_flow_W = v_W - v_ugv - Vec3(0.0, 0.0, yaw_rate).cross(p_W - ugv.position);
      }
      Vec3 v_meas = r_WB.transpose() * v_flow_W;
      // Pixel rate is converted with the deck-relative height estimate, so the
      // horizontal scale is wrong wherever the true range differs (off the deck).
      const double range = x_B.z() - ground;
      if (airborne && range > kMinFlowRange) {
        const double h_est = std::max(ekf.state().position.z(), kMinFlowRange);
        v_meas.head<2>() *= std::min(h_est / range, 2.0);
      }
      if (airborne) {
        for (int k = 0; k < 2; ++k) {
          flow_bias[k] += cfg.noise.flow_bias_drift * std::sqrt(kBaseDt) * gauss(rng);
        }
        v_meas.head<2>() += flow_bias;
      }
      for (int k = 0; k < 3; ++k) v_meas[k] += cfg.noise.flow_velocity_sigma * gauss(rng);
      if (step > 0) ekf.predict_to(t, v_meas);

      if (step % kTofDecimation == 0) {
        const double raw = std::max(0.0, x_B.z() - ground + cfg.noise.tof_sigma * gauss(rng));
        const auto out = tof_step_filter(tof, raw, kTofDecimation * kBaseDt);
        tof = out.state;
        ekf.update_tof(t, out.altitude);
        sample.tof_updated = true;
        sample.tof_raw = raw;
        sample.tof_altitude = out.altitude;
      }
      sample.tof_mode = tof.mode;

      if (cfg.mi_enabled && step % kMiDecimation == 0) {
        const Vec3 n_true = r_BT * sys.rx_normal_T;
        const auto v_true =
            forward_voltages_checked(x_B, n_true, sys.layout, sys.rx_coil, sys.chain);
        AnchorVoltages truth{};
        ToneArray amps{};
        for (int i = 0; i < kAnchorCount; ++i) {
          truth[i] = v_true[i].value_or(std::numeric_limits<double>::infinity());
          amps[i] = v_true[i] ? *v_true[i] * cfg.hardware_gain[i] : sys.adc.full_scale;
        }
        if (cfg.saturation_fault) {
          const auto& f = *cfg.saturation_fault;
          const bool active = t >= f.start && t < f.start + f.duration;
          if (active != fault_active) {
            log.events.push_back({t, active ? EventKind::SaturationFaultStart
                                            : EventKind::SaturationFaultEnd, "", x_B});
            fault_active = active;
          }
          if (active) amps[f.anchor] = f.amplitude;
        }
        ToneArray ph{};
        for (double& p : ph) p = random_phase(rng);
        const SampleFrame frame =
            synthesize_frame(amps, freqs, ph, sys.adc, cfg.noise.adc_noise_sigma, rng(), t);
        const SpectralAmplitudes raw = extract_amplitudes(frame, freqs, sys.adc, sys.v_sat_thresh);

        const Mat3 r_BT_est =
            r_BT * small_tilt(cfg.noise.attitude_sigma * gauss(rng),
                              cfg.noise.attitude_sigma * gauss(rng));
        const Vec3 n_est = (r_BT_est * sys.rx_normal_T).normalized();

        MiEstimate prev;
        prev.position_B = ekf.state().position;
        prev.consecutive_rejections = rejections;
        prev.accepted = true;
        sample.mi_truth_voltages = truth;
        try {
          const MiEstimate est = estimate_position(raw, log.calibration, prev, n_est, sys.layout,
                                                   sys.rx_coil, sys.chain, cfg.solver, t);
          rejections = est.consecutive_rejections;
          if (est.accepted) {
            ekf.update_position(t, est.position_B);
            last_fix_t = t;
          }
          sample.mi = est;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoActiveAnchors) throw;
          ++rejections;
        }
      }
    } catch (const Error& e) {
      sample.ekf_position = ekf.state().position;
      log.samples.push_back(sample);
      end_trial(t, EventKind::Abort, std::string("estimator divergence: ") + e.what(), x_B);
      break;
    }

    const EkfState& est = ekf.state();
    sample.ekf_position = est.position;
    sample.ekf_velocity = est.velocity;
    sample.ekf_position_trace = est.covariance.topLeftCorner<3, 3>().trace();

    if (airborne) {
      command_B = uav_controller(est, ref.position, cfg.controller, ref.velocity);
      sample.command_B = command_B;
      sample.descending = phase == MissionPhase::Landing && command_B.z() < 0.0;
    }
    log.samples.push_back(sample);

    if (airborne) {
      if ((x_B - ref.position).norm() > cfg.geofence) {
        end_trial(t, EventKind::GeofenceBreach, "", x_B);
        break;
      }
      if (!est.valid() || sample.ekf_position_trace > cfg.divergence_trace) {
        end_trial(t, EventKind::Abort, "estimator divergence", x_B);
        break;
      }
      if (cfg.mi_enabled && t - last_fix_t > cfg.signal_loss_timeout) {
        end_trial(t, EventKind::Abort, "signal loss", x_B);
        break;
      }
    } else if (cfg.mi_enabled) {
      last_fix_t = t;
    }

    if (step == total_steps) break;

    // Truth propagation to t + dt.
    if (airborne) {
      const Vec3 cmd_W = r_WB * command_B;
      accel_W = (cmd_W - v_W) / cfg.uav_time_constant;
      v_W += accel_W * kBaseDt;
      p_W += v_W * kBaseDt;

      const Pose ugv_next = ugv_pose_at(cfg, t + kBaseDt);
      Vec3 x_next = ugv_next.rotation().transpose() * (p_W - ugv_next.position);
      const double ground = ground_height(cfg, x_next);
      if (x_next.z() <= ground) {
        x_next.z() = ground;
        p_W = transform_point(ugv_next, x_next);
        if (sample.descending) {
          airborne = false;
          touched_down = true;
          landed_offset_B = x_next;
          log.events.push_back({t + kBaseDt, EventKind::Touchdown, "", x_next});

          TrialSample last = sample;
          last.t = t + kBaseDt;
          last.phase = MissionPhase::Landed;
          last.ugv_W = ugv_next;
          last.uav_W = Pose{p_W, ugv_next.orientation};
          last.uav_B = x_next;
          last.mi.reset();
          last.mi_truth_voltages.reset();
          last.tof_updated = false;
          last.command_B.setZero();
          last.descending = false;
          log.samples.push_back(last);
          break;
        }
        if (v_W.z() < 0.0) v_W.z() = 0.0;
      }
    }
  }

  log.events.push_back({log.samples.empty() ? 0.0 : log.samples.back().t, EventKind::MissionEnd,
                        "", log.samples.empty() ? Vec3::Zero() : log.samples.back().uav_B});
  return log;
}

BatchResult run_batch(std::span<const ScenarioConfig> cfgs, int max_threads) {
  BatchResult result;
  result.logs.resize(cfgs.size());
  result.reports.resize(cfgs.size());
  if (cfgs.empty()) return result;

  unsigned workers = max_threads > 0 ? static_cast<unsigned>(max_threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cfgs.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cfgs.size());
  auto work = [&] {
    for (std::size_t k = next++; k < cfgs.size(); k = next++) {
      try {
        result.logs[k] = run_trial(cfgs[k]);
        result.reports[k] = evaluate_trial(result.logs[k], cfgs[k].system.layout, cfgs[k].geofence);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.aggregate = aggregate(result.reports);
  return result;
}

BatchResult run_batch(const ScenarioConfig& base, std::span<const std::uint64_t> seeds,
                      int max_threads) {
  std::vector<ScenarioConfig> cfgs;
  cfgs.reserve(seeds.size());
  for (auto s : seeds) {
    ScenarioConfig c = base;
    c.seed = s;
    cfgs.push_back(std::move(c));
  }
  return run_batch(std::span<const ScenarioConfig>(cfgs), max_threads);
}

}  // namespace magdock
