#pragma once

#include <array>

#include <Eigen/Dense>
#include <Eigen/Geometry>

// Frames:
//   {W} world (arena) frame
//   {B} UGV / anchor frame, origin at the pad center on the coil plane
//   {T} UAV body frame carrying the receive coil
namespace magdock {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;

inline constexpr int kAnchorCount = 4;
inline constexpr double kUnitTolerance = 1e-9;

struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {t, Quat::Identity()}; }
  // Z-Y-X (yaw, pitch, roll) Euler convention.
  static Pose from_euler(const Vec3& t, double roll, double pitch, double yaw);

  bool valid() const;
  Pose inverse() const;
  // this * other: maps a point from other's child frame through both transforms.
  Pose compose(const Pose& other) const;
  Mat3 rotation() const { return orientation.toRotationMatrix(); }
  double yaw() const;
};

Vec3 transform_point(const Pose& pose, const Vec3& p);
Vec3 rotate_vector(const Pose& pose, const Vec3& v);

// n^B = R_T^B n^T. Throws ContractViolation if n_T is not unit length.
Vec3 receiver_normal_in_B(const Pose& attitude, const Vec3& n_T);

bool is_unit(const Vec3& v, double tol = kUnitTolerance);

struct AnchorConfig {
  Vec3 position_B = Vec3::Zero();
  Vec3 axis_B = Vec3::UnitZ();
  double frequency_hz = 0.0;
  double drive_current_amplitude = 0.5;  // A, peak
  int turns = 5;
  double area = 0.0;  // m^2
};

struct AnchorLayout {
  std::array<AnchorConfig, kAnchorCount> anchors{};
  Vec3 pad_center_B = Vec3::Zero();
  double pad_radius = 0.11;
  double pad_length = 0.44;  // along x of {B}
  double pad_width = 0.25;   // along y of {B}

  // Coils at the corners of the pad rectangle, numbered counter-clockwise
  // from the front-left corner, driven at 210/199/189/181 kHz.
  static AnchorLayout standard();

  // Throws ConfigError when an invariant does not hold.
  void validate() const;

  std::array<double, kAnchorCount> frequencies() const;
};

struct AnchorPlacement {
  Vec3 position;
  Vec3 axis;
};

std::array<AnchorPlacement, kAnchorCount> anchors_in_world(const Pose& ugv_pose,
                                                           const AnchorLayout& layout);

}  // namespace magdock
