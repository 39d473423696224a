#pragma once

#include <limits>

#include "magdock/geometry.hpp"

namespace magdock {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Position/velocity filter in {B}. Attitude is an external input.
struct EkfState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Mat6 covariance = Mat6::Identity() * 1e-4;

  static EkfState at(const Vec3& position, double sigma_position, double sigma_velocity);
  bool valid() const;  // finite, symmetric, positive-definite
};

struct EkfConfig {
  Mat3 r_mag = Eigen::Vector3d(0.02 * 0.02, 0.02 * 0.02, 0.04 * 0.04).asDiagonal();
  double r_tof = 0.01 * 0.01;  // m^2
  Mat6 q_process = default_process_noise();

  static Mat6 default_process_noise();
  void validate() const;
};

// Propagates with the measured velocity (already expressed in {B}):
// p += v_meas * dt, v = v_meas, P += Q * dt.
EkfState ekf_predict(const EkfState& state, const Vec3& velocity_meas, double dt,
                     const EkfConfig& cfg);

// Absolute position update with R = cfg.r_mag (Joseph form).
EkfState ekf_update_position(const EkfState& state, const Vec3& z, const EkfConfig& cfg);

// Same update with an explicit covariance; entry point for any other absolute
// position source.
EkfState ekf_update_position(const EkfState& state, const Vec3& z, const Mat3& r);

// Scalar altitude update on z.
EkfState ekf_update_tof(const EkfState& state, double compensated_altitude, const EkfConfig& cfg);

enum class TofMode { Nominal, StepHold };

struct TofFilterState {
  TofMode mode = TofMode::Nominal;
  double baseline_d0 = 0.0;  // m, subtracted from the raw range
  double last_raw = std::numeric_limits<double>::quiet_NaN();
  double step_threshold = 2.0;  // m/s
  double hold_value = 0.0;      // last compensated output

  void validate() const;
};

struct TofFilterOutput {
  double altitude = 0.0;
  TofFilterState state{};
};

// Surface-step filter for the downward rangefinder. A range rate at or above the
// threshold is treated as a change of ground reference: the output holds the last
// compensated value and the baseline is realigned so later outputs stay continuous.
// Throws SensorFault for negative ranges.
TofFilterOutput tof_step_filter(const TofFilterState& tstate, double raw_d, double dt);

// Enforces timestamp ordering on top of the pure filter steps. Measurements older
// than the last processed time are dropped and counted.
class FusionFilter {
 public:
  FusionFilter(const EkfState& initial, const EkfConfig& cfg, double t0);

  bool predict_to(double t, const Vec3& velocity_meas_B);
  bool update_position(double t, const Vec3& z);
  bool update_position(double t, const Vec3& z, const Mat3& r);
  bool update_tof(double t, double compensated_altitude);

  const EkfState& state() const { return state_; }
  const EkfConfig& config() const { return cfg_; }
  double time() const { return time_; }
  int dropped() const { return dropped_; }

 private:
  bool accept_time(double t);

  EkfState state_;
  EkfConfig cfg_;
  double time_;
  int dropped_ = 0;
};

}  // namespace magdock
