#include "magdock/fusion.hpp"

#include <cmath>

#include "magdock/errors.hpp"

namespace magdock {

namespace {

bool positive_definite(const Mat6& p) {
  if (!p.allFinite()) return false;
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, p.cwiseAbs().maxCoeff())) {
    return false;
  }
  Eigen::LLT<Mat6> llt(p);
  return llt.info() == Eigen::Success;
}

void check_finite(const Vec3& v, const char* what) {
  if (!v.allFinite()) fail(ErrorCode::NumericalError, std::string("non-finite ") + what);
}

template <int M>
EkfState joseph_update(const EkfState& state, const Eigen::Matrix<double, M, 6>& h,
                       const Eigen::Matrix<double, M, 1>& innovation,
                       const Eigen::Matrix<double, M, M>& r) {
  const Mat6& p = state.covariance;
  const Eigen::Matrix<double, M, M> s = h * p * h.transpose() + r;
  const Eigen::Matrix<double, 6, M> k = p * h.transpose() * s.inverse();
  Vec6 x;
  x << state.position, state.velocity;
  x += k * innovation;
  const Mat6 i_kh = Mat6::Identity() - k * h;
  Mat6 p_new = i_kh * p * i_kh.transpose() + k * r * k.transpose();
  p_new = 0.5 * (p_new + p_new.transpose());

  EkfState out{x.head<3>(), x.tail<3>(), p_new};
  if (!positive_definite(out.covariance) || !x.allFinite()) {
    fail(ErrorCode::NumericalError, "covariance lost positive-definiteness in update");
  }
  return out;
}

}  // namespace

EkfState EkfState::at(const Vec3& position, double sigma_position, double sigma_velocity) {
  EkfState s;
  s.position = position;
  s.velocity = Vec3::Zero();
  s.covariance.setZero();
  s.covariance.topLeftCorner<3, 3>() = Mat3::Identity() * sigma_position * sigma_position;
  s.covariance.bottomRightCorner<3, 3>() = Mat3::Identity() * sigma_velocity * sigma_velocity;
  return s;
}

bool EkfState::valid() const {
  return position.allFinite() && velocity.allFinite() && positive_definite(covariance);
}

Mat6 EkfConfig::default_process_noise() {
  Vec6 d;
  d << 0.02, 0.02, 0.02, 0.05, 0.05, 0.05;  // m^2/s, (m/s)^2/s
  return d.asDiagonal();
}

void EkfConfig::validate() const {
  Eigen::LLT<Mat3> r(r_mag);
  if (r.info() != Eigen::Success || !r_mag.allFinite()) {
    fail(ErrorCode::ConfigError, "r_mag must be positive-definite");
  }
  if (!(r_tof > 0.0)) fail(ErrorCode::ConfigError, "r_tof must be positive");
  if (!positive_definite(q_process)) fail(ErrorCode::ConfigError, "q_process must be positive-definite");
}

EkfState ekf_predict(const EkfState& state, const Vec3& velocity_meas, double dt,
                     const EkfConfig& cfg) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::ContractViolation, "dt must be > 0");
  check_finite(velocity_meas, "velocity measurement");
  EkfState out;
  out.position = state.position + velocity_meas * dt;
  out.velocity = velocity_meas;
  out.covariance = state.covariance + cfg.q_process * dt;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  if (!out.position.allFinite() || !out.covariance.allFinite()) {
    fail(ErrorCode::NumericalError, "non-finite state after prediction");
  }
  return out;
}

EkfState ekf_update_position(const EkfState& state, const Vec3& z, const Mat3& r) {
  check_finite(z, "position measurement");
  Eigen::Matrix<double, 3, 6> h = Eigen::Matrix<double, 3, 6>::Zero();
  h.leftCols<3>() = Mat3::Identity();
  const Vec3 innovation = z - state.position;
  return joseph_update<3>(state, h, innovation, r);
}

EkfState ekf_update_position(const EkfState& state, const Vec3& z, const EkfConfig& cfg) {
  return ekf_update_position(state, z, cfg.r_mag);
}

EkfState ekf_update_tof(const EkfState& state, double compensated_altitude, const EkfConfig& cfg) {
  if (!std::isfinite(compensated_altitude)) fail(ErrorCode::NumericalError, "non-finite altitude");
  Eigen::Matrix<double, 1, 6> h = Eigen::Matrix<double, 1, 6>::Zero();
  h(0, 2) = 1.0;
  Eigen::Matrix<double, 1, 1> innovation;
  innovation(0) = compensated_altitude - state.position.z();
  Eigen::Matrix<double, 1, 1> r;
  r(0) = cfg.r_tof;
  return joseph_update<1>(state, h, innovation, r);
}

void TofFilterState::validate() const {
  if (!(step_threshold > 0.0)) fail(ErrorCode::ConfigError, "ToF step threshold must be > 0");
  if (!std::isfinite(baseline_d0)) fail(ErrorCode::ConfigError, "ToF baseline must be finite");
}

TofFilterOutput tof_step_filter(const TofFilterState& tstate, double raw_d, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::ContractViolation, "dt must be > 0");
  if (!(raw_d >= 0.0)) fail(ErrorCode::SensorFault, "negative or invalid rangefinder reading");

  TofFilterOutput out;
  out.state = tstate;
  TofFilterState& s = out.state;
  if (std::isnan(s.last_raw)) {
    s.mode = TofMode::Nominal;
    out.altitude = raw_d - s.baseline_d0;
  } else {
    const double rate = std::abs(raw_d - s.last_raw) / dt;
    if (rate < s.step_threshold) {
      s.mode = TofMode::Nominal;
      out.altitude = raw_d - s.baseline_d0;
    } else {
      s.mode = TofMode::StepHold;
      out.altitude = s.hold_value;
      s.baseline_d0 = raw_d - s.hold_value;
    }
  }
  s.hold_value = out.altitude;
  s.last_raw = raw_d;
  return out;
}

FusionFilter::FusionFilter(const EkfState& initial, const EkfConfig& cfg, double t0)
    : state_(initial), cfg_(cfg), time_(t0) {
  cfg_.validate();
}

bool FusionFilter::accept_time(double t) {
  if (t < time_) {
    ++dropped_;
    return false;
  }
  return true;
}

bool FusionFilter::predict_to(double t, const Vec3& velocity_meas_B) {
  if (!accept_time(t)) return false;
  if (t > time_) {
    state_ = ekf_predict(state_, velocity_meas_B, t - time_, cfg_);
    time_ = t;
  }
  return true;
}

bool FusionFilter::update_position(double t, const Vec3& z) {
  return update_position(t, z, cfg_.r_mag);
}

bool FusionFilter::update_position(double t, const Vec3& z, const Mat3& r) {
  if (!accept_time(t)) return false;
  state_ = ekf_update_position(state_, z, r);
  time_ = t;
  return true;
}

bool FusionFilter::update_tof(double t, double compensated_altitude) {
  if (!accept_time(t)) return false;
  state_ = ekf_update_tof(state_, compensated_altitude, cfg_);
  time_ = t;
  return true;
}

}  // namespace magdock
