#include "magdock/serialization.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "magdock/errors.hpp"

namespace magdock {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

double to_deg(double r) { return r * 180.0 / std::numbers::pi; }
double to_rad(double d) { return d * std::numbers::pi / 180.0; }

[[noreturn]] void config_error(const std::string& where, const std::string& msg) {
  fail(ErrorCode::ConfigError, where.empty() ? msg : where + ": " + msg);
}

// Rejects keys outside the allowed set so typos never pass silently.
void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_error(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.contains(key)) config_error(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(where + "." + key, "wrong type");
  }
}

Vec3 vec3_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) config_error(where, "expected [x, y, z]");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) config_error(where, "expected numbers");
    v[k] = j[k].get<double>();
  }
  return v;
}

void read_vec3(const json& j, const char* key, Vec3& out, const std::string& where) {
  if (j.contains(key)) out = vec3_from(j.at(key), where + "." + key);
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Pose pose_from(const json& j, const std::string& where) {
  check_keys(j, where, {"position", "rpy_deg"});
  Vec3 p = Vec3::Zero(), rpy = Vec3::Zero();
  read_vec3(j, "position", p, where);
  read_vec3(j, "rpy_deg", rpy, where);
  return Pose::from_euler(p, to_rad(rpy.x()), to_rad(rpy.y()), to_rad(rpy.z()));
}

json pose_json(const Pose& pose) {
  const Mat3 r = pose.rotation();
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {{"position", vec3_json(pose.position)},
          {"rpy_deg", json::array({to_deg(roll), to_deg(pitch), to_deg(yaw)})}};
}

void read_noise(const json& j, NoiseConfig& n) {
  const std::string w = "noise";
  check_keys(j, w, {"adc_noise_sigma", "flow_velocity_sigma", "flow_bias_drift", "tof_sigma",
                    "attitude_sigma_deg"});
  read(j, "adc_noise_sigma", n.adc_noise_sigma, w);
  read(j, "flow_velocity_sigma", n.flow_velocity_sigma, w);
  read(j, "flow_bias_drift", n.flow_bias_drift, w);
  read(j, "tof_sigma", n.tof_sigma, w);
  if (j.contains("attitude_sigma_deg")) {
    double d = 0.0;
    read(j, "attitude_sigma_deg", d, w);
    n.attitude_sigma = to_rad(d);
  }
}

void read_solver(const json& j, SolverOptions& s) {
  const std::string w = "solver";
  check_keys(j, w, {"box_min", "box_max", "initial_simplex_scale", "tol_x", "tol_f", "max_iters",
                    "outlier_delta", "seed_radius"});
  read_vec3(j, "box_min", s.box.min, w);
  read_vec3(j, "box_max", s.box.max, w);
  read(j, "initial_simplex_scale", s.initial_simplex_scale, w);
  read(j, "tol_x", s.tol_x, w);
  read(j, "tol_f", s.tol_f, w);
  read(j, "max_iters", s.max_iters, w);
  read(j, "outlier_delta", s.outlier_delta, w);
  read(j, "seed_radius", s.seed_radius, w);
}

void read_ekf(const json& j, EkfConfig& e) {
  const std::string w = "ekf";
  check_keys(j, w, {"mag_sigma", "tof_sigma", "process_position", "process_velocity"});
  if (j.contains("mag_sigma")) {
    const Vec3 s = vec3_from(j.at("mag_sigma"), w + ".mag_sigma");
    e.r_mag = s.cwiseProduct(s).asDiagonal();
  }
  if (j.contains("tof_sigma")) {
    double s = 0.0;
    read(j, "tof_sigma", s, w);
    e.r_tof = s * s;
  }
  if (j.contains("process_position") || j.contains("process_velocity")) {
    double qp = e.q_process(0, 0), qv = e.q_process(3, 3);
    read(j, "process_position", qp, w);
    read(j, "process_velocity", qv, w);
    Vec6 d;
    d << qp, qp, qp, qv, qv, qv;
    e.q_process = d.asDiagonal();
  }
}

void read_controller(const json& j, ControllerLimits& c) {
  const std::string w = "controller";
  check_keys(j, w, {"kp", "kd", "max_horizontal_speed", "max_vertical_speed"});
  read(j, "kp", c.kp, w);
  read(j, "kd", c.kd, w);
  read(j, "max_horizontal_speed", c.max_horizontal_speed, w);
  read(j, "max_vertical_speed", c.max_vertical_speed, w);
}

void read_layout(const json& j, AnchorLayout& l) {
  const std::string w = "layout";
  check_keys(j, w, {"pad_center", "pad_radius", "pad_length", "pad_width", "anchors"});
  read_vec3(j, "pad_center", l.pad_center_B, w);
  read(j, "pad_radius", l.pad_radius, w);
  read(j, "pad_length", l.pad_length, w);
  read(j, "pad_width", l.pad_width, w);
  if (!j.contains("anchors")) return;
  const json& arr = j.at("anchors");
  if (!arr.is_array() || arr.size() != kAnchorCount) config_error(w + ".anchors", "expected 4 anchors");
  for (int i = 0; i < kAnchorCount; ++i) {
    const std::string wi = w + ".anchors[" + std::to_string(i) + "]";
    const json& a = arr[static_cast<std::size_t>(i)];
    check_keys(a, wi, {"position", "axis", "frequency_hz", "drive_current", "turns", "area"});
    auto& an = l.anchors[i];
    read_vec3(a, "position", an.position_B, wi);
    read_vec3(a, "axis", an.axis_B, wi);
    read(a, "frequency_hz", an.frequency_hz, wi);
    read(a, "drive_current", an.drive_current_amplitude, wi);
    read(a, "turns", an.turns, wi);
    read(a, "area", an.area, wi);
  }
}

void read_system(const json& j, MiSystem& s) {
  const std::string w = "system";
  check_keys(j, w, {"layout", "receiver_turns", "receiver_radius", "programmable_gain", "adc",
                    "v_sat_thresh", "receiver_normal"});
  if (j.contains("layout")) read_layout(j.at("layout"), s.layout);
  if (j.contains("receiver_turns") || j.contains("receiver_radius")) {
    int turns = s.rx_coil.turns;
    double radius = s.rx_coil.radius;
    read(j, "receiver_turns", turns, w);
    read(j, "receiver_radius", radius, w);
    s.rx_coil = CoilParams::circular(turns, radius);
  }
  read(j, "programmable_gain", s.chain.programmable_stage, w);
  if (j.contains("adc")) {
    const json& a = j.at("adc");
    check_keys(a, w + ".adc", {"sample_rate", "bits", "full_scale", "frame_length"});
    read(a, "sample_rate", s.adc.sample_rate, w + ".adc");
    read(a, "bits", s.adc.bits, w + ".adc");
    read(a, "full_scale", s.adc.full_scale, w + ".adc");
    read(a, "frame_length", s.adc.frame_length, w + ".adc");
    if (!j.contains("v_sat_thresh")) s.v_sat_thresh = s.adc.default_saturation_threshold();
  }
  read(j, "v_sat_thresh", s.v_sat_thresh, w);
  read_vec3(j, "receiver_normal", s.rx_normal_T, w);
}

CalibrationCoefficients calibration_from(const json& j, const std::string& w) {
  check_keys(j, w, {"coefficients", "reference_pose", "n_cal", "metadata"});
  CalibrationCoefficients c;
  if (!j.contains("coefficients")) config_error(w, "missing coefficients");
  const json& m = j.at("coefficients");
  if (!m.is_object() || m.size() != kAnchorCount) config_error(w, "expected 4 coefficients");
  for (int i = 0; i < kAnchorCount; ++i) {
    const std::string id = std::to_string(i + 1);
    if (!m.contains(id) || !m.at(id).is_number()) config_error(w, "missing coefficient " + id);
    c.c[i] = m.at(id).get<double>();
  }
  if (j.contains("reference_pose")) c.reference_pose = pose_from(j.at("reference_pose"), w + ".reference_pose");
  read(j, "n_cal", c.n_cal, w);
  try {
    c.validate();
  } catch (const Error& e) {
    config_error(w, e.what());
  }
  return c;
}

json calibration_json(const CalibrationCoefficients& c) {
  ordered_json coeffs;
  for (int i = 0; i < kAnchorCount; ++i) coeffs[std::to_string(i + 1)] = c.c[i];
  ordered_json j;
  j["coefficients"] = coeffs;
  j["reference_pose"] = pose_json(c.reference_pose);
  j["n_cal"] = c.n_cal;
  return j;
}

ordered_json report_json(const TrialReport& r) {
  ordered_json j;
  j["seed"] = r.seed;
  j["scenario"] = std::string(to_string(r.kind));
  j["rmse_3d"] = r.rmse_3d;
  j["rmse_axiswise"] = vec3_json(r.rmse_axiswise);
  j["tracking_rmse"] = r.tracking_rmse;
  j["success"] = r.success;
  j["failure_reason"] =
      r.failure_reason ? json(std::string(to_string(*r.failure_reason))) : json(nullptr);
  j["touchdown_error"] = r.touchdown_error ? json(*r.touchdown_error) : json(nullptr);
  j["touchdown_inside_pad"] = r.touchdown_inside_pad ? json(*r.touchdown_inside_pad) : json(nullptr);
  j["samples"] = r.samples;
  return j;
}

}  // namespace

ScenarioConfig scenario_from_json(std::string_view text, std::optional<ScenarioKind> kind_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error("config", std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"scenario", "seed", "duration", "mi_enabled", "noise", "ugv_path", "setpoints",
              "solver", "ekf", "controller", "system", "takeoff_delay", "deck_height",
              "uav_time_constant", "tof_step_threshold", "geofence", "signal_loss_timeout",
              "divergence_trace", "n_cal", "calibration", "hardware_gain", "saturation_fault"});

  ScenarioKind kind = ScenarioKind::S1_Hover;
  if (j.contains("scenario")) {
    if (!j.at("scenario").is_string()) config_error("scenario", "expected a string");
    const auto k = scenario_kind_from_string(j.at("scenario").get<std::string>());
    if (!k) config_error("scenario", "unknown scenario '" + j.at("scenario").get<std::string>() + "'");
    kind = *k;
  }
  if (kind_override) kind = *kind_override;
  ScenarioConfig cfg = ScenarioConfig::preset(kind);

  const std::string w = "config";
  std::uint64_t seed = cfg.seed;
  read(j, "seed", seed, w);
  cfg.seed = seed;
  read(j, "mi_enabled", cfg.mi_enabled, w);
  if (j.contains("noise")) read_noise(j.at("noise"), cfg.noise);
  if (j.contains("solver")) read_solver(j.at("solver"), cfg.solver);
  if (j.contains("ekf")) read_ekf(j.at("ekf"), cfg.ekf);
  if (j.contains("controller")) read_controller(j.at("controller"), cfg.controller);
  if (j.contains("system")) read_system(j.at("system"), cfg.system);

  if (j.contains("ugv_path")) {
    const json& arr = j.at("ugv_path");
    if (!arr.is_array() || arr.empty()) config_error("ugv_path", "expected a non-empty array");
    cfg.ugv_path.clear();
    for (const auto& wp : arr) {
      check_keys(wp, "ugv_path[]", {"t", "x", "y", "yaw_deg"});
      UgvWaypoint u;
      double yaw_deg = 0.0;
      read(wp, "t", u.t, "ugv_path[]");
      read(wp, "x", u.x, "ugv_path[]");
      read(wp, "y", u.y, "ugv_path[]");
      read(wp, "yaw_deg", yaw_deg, "ugv_path[]");
      u.yaw = to_rad(yaw_deg);
      cfg.ugv_path.push_back(u);
    }
  }
  if (j.contains("setpoints")) {
    const json& arr = j.at("setpoints");
    if (!arr.is_array() || arr.empty()) config_error("setpoints", "expected a non-empty array");
    cfg.setpoints.clear();
    for (const auto& sp : arr) {
      check_keys(sp, "setpoints[]", {"target", "speed", "dwell", "landing"});
      MissionLeg leg;
      read_vec3(sp, "target", leg.target_B, "setpoints[]");
      read(sp, "speed", leg.speed, "setpoints[]");
      read(sp, "dwell", leg.dwell, "setpoints[]");
      read(sp, "landing", leg.landing, "setpoints[]");
      cfg.setpoints.push_back(leg);
    }
  }
  read(j, "takeoff_delay", cfg.takeoff_delay, w);
  read(j, "deck_height", cfg.deck_height, w);
  read(j, "uav_time_constant", cfg.uav_time_constant, w);
  read(j, "tof_step_threshold", cfg.tof_step_threshold, w);
  read(j, "geofence", cfg.geofence, w);
  read(j, "signal_loss_timeout", cfg.signal_loss_timeout, w);
  read(j, "divergence_trace", cfg.divergence_trace, w);
  read(j, "n_cal", cfg.n_cal, w);
  if (j.contains("hardware_gain")) {
    const json& g = j.at("hardware_gain");
    if (!g.is_array() || g.size() != kAnchorCount) config_error("hardware_gain", "expected 4 numbers");
    for (int i = 0; i < kAnchorCount; ++i) cfg.hardware_gain[i] = g[static_cast<std::size_t>(i)].get<double>();
  }
  if (j.contains("saturation_fault")) {
    const json& f = j.at("saturation_fault");
    const std::string wf = "saturation_fault";
    check_keys(f, wf, {"anchor", "start", "duration", "amplitude"});
    SaturationFault sf;
    int anchor_id = 1;
    read(f, "anchor", anchor_id, wf);
    sf.anchor = anchor_id - 1;
    read(f, "start", sf.start, wf);
    read(f, "duration", sf.duration, wf);
    read(f, "amplitude", sf.amplitude, wf);
    cfg.saturation_fault = sf;
  }
  if (j.contains("calibration")) cfg.calibration = calibration_from(j.at("calibration"), "calibration");

  if (j.contains("duration")) {
    read(j, "duration", cfg.duration, w);
  } else {
    cfg.duration = cfg.takeoff_delay + mission_length(cfg) + 8.0;
    if (!cfg.ugv_path.empty()) cfg.duration = std::max(cfg.duration, cfg.ugv_path.back().t);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path,
                                    std::optional<ScenarioKind> kind_override) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str(), kind_override);
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  ordered_json j;
  j["scenario"] = std::string(to_string(cfg.kind));
  j["seed"] = cfg.seed;
  j["duration"] = cfg.duration;
  j["mi_enabled"] = cfg.mi_enabled;
  j["noise"] = {{"adc_noise_sigma", cfg.noise.adc_noise_sigma},
                {"flow_velocity_sigma", cfg.noise.flow_velocity_sigma},
                {"flow_bias_drift", cfg.noise.flow_bias_drift},
                {"tof_sigma", cfg.noise.tof_sigma},
                {"attitude_sigma_deg", to_deg(cfg.noise.attitude_sigma)}};
  ordered_json path = ordered_json::array();
  for (const auto& w : cfg.ugv_path) {
    path.push_back({{"t", w.t}, {"x", w.x}, {"y", w.y}, {"yaw_deg", to_deg(w.yaw)}});
  }
  j["ugv_path"] = path;
  ordered_json legs = ordered_json::array();
  for (const auto& l : cfg.setpoints) {
    legs.push_back({{"target", vec3_json(l.target_B)},
                    {"speed", l.speed},
                    {"dwell", l.dwell},
                    {"landing", l.landing}});
  }
  j["setpoints"] = legs;
  j["solver"] = {{"box_min", vec3_json(cfg.solver.box.min)},
                 {"box_max", vec3_json(cfg.solver.box.max)},
                 {"initial_simplex_scale", cfg.solver.initial_simplex_scale},
                 {"tol_x", cfg.solver.tol_x},
                 {"tol_f", cfg.solver.tol_f},
                 {"max_iters", cfg.solver.max_iters},
                 {"outlier_delta", cfg.solver.outlier_delta},
                 {"seed_radius", cfg.solver.seed_radius}};
  j["controller"] = {{"kp", cfg.controller.kp},
                     {"kd", cfg.controller.kd},
                     {"max_horizontal_speed", cfg.controller.max_horizontal_speed},
                     {"max_vertical_speed", cfg.controller.max_vertical_speed}};
  j["takeoff_delay"] = cfg.takeoff_delay;
  j["deck_height"] = cfg.deck_height;
  j["uav_time_constant"] = cfg.uav_time_constant;
  j["tof_step_threshold"] = cfg.tof_step_threshold;
  j["geofence"] = cfg.geofence;
  j["signal_loss_timeout"] = cfg.signal_loss_timeout;
  j["divergence_trace"] = cfg.divergence_trace;
  j["n_cal"] = cfg.n_cal;
  j["hardware_gain"] = cfg.hardware_gain;
  return j.dump(2) + "\n";
}

std::string calibration_to_json(const CalibrationCoefficients& coeffs, std::string_view created_at) {
  ordered_json j = calibration_json(coeffs);
  j["metadata"] = {{"created_at", std::string(created_at)}};
  return j.dump(2) + "\n";
}

CalibrationCoefficients calibration_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error("calibration", std::string("invalid JSON: ") + e.what());
  }
  return calibration_from(j, "calibration");
}

CalibrationCoefficients load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open calibration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return calibration_from_json(ss.str());
}

std::string report_to_json(const TrialReport& report) { return report_json(report).dump(2) + "\n"; }

std::string batch_to_json(const BatchReport& batch, std::string_view created_at) {
  ordered_json j;
  j["trials"] = ordered_json::array();
  for (const auto& t : batch.trials) j["trials"].push_back(report_json(t));
  j["mean_rmse"] = batch.mean_rmse;
  j["success_rate"] = batch.success_rate;
  j["successes"] = batch.successes;
  j["touchdowns_inside_pad"] = batch.touchdowns_inside_pad;
  j["metadata"] = {{"created_at", std::string(created_at)}};
  return j.dump(2) + "\n";
}

void write_batch_table_csv(std::ostream& os, const BatchReport& batch) {
  os << std::setprecision(10);
  os << "trial,seed,rmse_3d_cm,rmse_x_cm,rmse_y_cm,rmse_z_cm,result,touchdown_error_cm,inside_pad\n";
  int n = 1;
  for (const auto& t : batch.trials) {
    os << n++ << ',' << t.seed << ',';
    if (t.success) {
      os << t.rmse_3d * 100.0 << ',' << t.rmse_axiswise.x() * 100.0 << ','
         << t.rmse_axiswise.y() * 100.0 << ',' << t.rmse_axiswise.z() * 100.0 << ",OK,";
    } else {
      os << ",,,,FAIL(" << to_string(*t.failure_reason) << "),";
    }
    if (t.touchdown_error) os << *t.touchdown_error * 100.0;
    os << ',';
    if (t.touchdown_inside_pad) os << (*t.touchdown_inside_pad ? "yes" : "no");
    os << '\n';
  }
  os << "Mean,,";
  if (batch.successes > 0) os << batch.mean_rmse * 100.0;
  os << ",,,,,,\n";
  os << "SC,," << batch.success_rate * 100.0 << ",,,,,,\n";
}

void write_trial_csv(std::ostream& os, const TrialLog& log) {
  os << std::setprecision(10);
  os << "t,phase,uav_W_x,uav_W_y,uav_W_z,uav_W_qw,uav_W_qx,uav_W_qy,uav_W_qz,"
        "ugv_W_x,ugv_W_y,ugv_W_yaw,uav_B_x,uav_B_y,uav_B_z,ref_B_x,ref_B_y,ref_B_z,"
        "ekf_x,ekf_y,ekf_z,ekf_vx,ekf_vy,ekf_vz,ekf_trace_p,cmd_x,cmd_y,cmd_z,"
        "tof_raw,tof_altitude,tof_mode,mi_x,mi_y,mi_z,mi_residual,mi_accepted,mi_active\n";
  for (const auto& s : log.samples) {
    const auto& q = s.uav_W.orientation;
    os << s.t << ',' << to_string(s.phase) << ',' << s.uav_W.position.x() << ','
       << s.uav_W.position.y() << ',' << s.uav_W.position.z() << ',' << q.w() << ',' << q.x() << ','
       << q.y() << ',' << q.z() << ',' << s.ugv_W.position.x() << ',' << s.ugv_W.position.y() << ','
       << s.ugv_W.yaw() << ',' << s.uav_B.x() << ',' << s.uav_B.y() << ',' << s.uav_B.z() << ','
       << s.reference_B.x() << ',' << s.reference_B.y() << ',' << s.reference_B.z() << ','
       << s.ekf_position.x() << ',' << s.ekf_position.y() << ',' << s.ekf_position.z() << ','
       << s.ekf_velocity.x() << ',' << s.ekf_velocity.y() << ',' << s.ekf_velocity.z() << ','
       << s.ekf_position_trace << ',' << s.command_B.x() << ',' << s.command_B.y() << ','
       << s.command_B.z() << ',';
    if (s.tof_updated) {
      os << s.tof_raw << ',' << s.tof_altitude << ','
         << (s.tof_mode == TofMode::Nominal ? "nominal" : "step_hold");
    } else {
      os << ",,";
    }
    os << ',';
    if (s.mi) {
      os << s.mi->position_B.x() << ',' << s.mi->position_B.y() << ',' << s.mi->position_B.z() << ','
         << s.mi->residual << ',' << (s.mi->accepted ? 1 : 0) << ',' << s.mi->active_count();
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
}

std::string trial_sidecar_json(const TrialLog& log, const TrialReport& report) {
  ordered_json j;
  j["scenario"] = std::string(to_string(log.kind));
  j["seed"] = log.seed;
  j["dt"] = log.dt;
  j["duration"] = log.duration;
  j["mi_enabled"] = log.mi_enabled;
  if (log.mi_enabled) j["calibration"] = calibration_json(log.calibration);
  ordered_json events = ordered_json::array();
  for (const auto& e : log.events) {
    ordered_json ev;
    ev["t"] = e.t;
    ev["kind"] = std::string(to_string(e.kind));
    ev["position_B"] = vec3_json(e.position_B);
    if (!e.detail.empty()) ev["detail"] = e.detail;
    events.push_back(ev);
  }
  j["events"] = events;
  j["summary"] = report_json(report);
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorCode::IoError, "short write to " + path.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

}  // namespace magdock
