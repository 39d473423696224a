#include "magdock/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "magdock/errors.hpp"

namespace magdock {

Pose Pose::from_euler(const Vec3& t, double roll, double pitch, double yaw) {
  const Quat q = Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                 Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                 Eigen::AngleAxisd(roll, Vec3::UnitX());
  return {t, q.normalized()};
}

bool Pose::valid() const {
  return position.allFinite() && orientation.coeffs().allFinite() &&
         std::abs(orientation.norm() - 1.0) <= kUnitTolerance;
}

Pose Pose::inverse() const {
  const Quat qi = orientation.conjugate();
  return {-(qi * position), qi};
}

Pose Pose::compose(const Pose& other) const {
  Quat q = orientation * other.orientation;
  q.normalize();
  return {position + orientation * other.position, q};
}

double Pose::yaw() const {
  const Mat3 r = rotation();
  return std::atan2(r(1, 0), r(0, 0));
}

Vec3 transform_point(const Pose& pose, const Vec3& p) {
  return pose.orientation * p + pose.position;
}

Vec3 rotate_vector(const Pose& pose, const Vec3& v) { return pose.orientation * v; }

bool is_unit(const Vec3& v, double tol) {
  return v.allFinite() && std::abs(v.norm() - 1.0) <= tol;
}

Vec3 receiver_normal_in_B(const Pose& attitude, const Vec3& n_T) {
  if (!is_unit(n_T)) {
    fail(ErrorCode::ContractViolation, "receiver normal must be a unit vector");
  }
  Vec3 n = attitude.orientation.normalized() * n_T;
  return n.normalized();
}

AnchorLayout AnchorLayout::standard() {
  AnchorLayout layout;
  const double hx = layout.pad_length / 2.0;
  const double hy = layout.pad_width / 2.0;
  const std::array<Vec3, kAnchorCount> corners{
      Vec3{hx, hy, 0.0}, Vec3{-hx, hy, 0.0}, Vec3{-hx, -hy, 0.0}, Vec3{hx, -hy, 0.0}};
  const std::array<double, kAnchorCount> freqs{210e3, 199e3, 189e3, 181e3};
  const double radius = 0.019;
  for (int i = 0; i < kAnchorCount; ++i) {
    auto& a = layout.anchors[i];
    a.position_B = layout.pad_center_B + corners[i];
    a.axis_B = Vec3::UnitZ();
    a.frequency_hz = freqs[i];
    a.drive_current_amplitude = 0.5;
    a.turns = 5;
    a.area = std::numbers::pi * radius * radius;
  }
  return layout;
}

void AnchorLayout::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorCode::ConfigError, msg); };
  if (!(pad_radius > 0.0) || !(pad_length > 0.0) || !(pad_width > 0.0)) {
    bad("pad dimensions must be positive");
  }
  for (int i = 0; i < kAnchorCount; ++i) {
    const auto& a = anchors[i];
    std::ostringstream id;
    id << "anchor " << i + 1 << ": ";
    if (!a.position_B.allFinite()) bad(id.str() + "non-finite position");
    if (!is_unit(a.axis_B)) bad(id.str() + "axis must be a unit vector");
    if ((a.axis_B - Vec3::UnitZ()).norm() > 1e-9) bad(id.str() + "axis must be vertical (0,0,1)");
    if (!(a.frequency_hz > 0.0)) bad(id.str() + "frequency must be positive");
    if (!(a.drive_current_amplitude > 0.0)) bad(id.str() + "drive current must be positive");
    if (a.turns < 1) bad(id.str() + "turns must be >= 1");
    if (!(a.area > 0.0)) bad(id.str() + "coil area must be positive");
    for (int j = 0; j < i; ++j) {
      if (anchors[j].frequency_hz == a.frequency_hz) bad(id.str() + "duplicate frequency");
    }
    // Must sit on a corner of the pad rectangle, on the z = 0 plane.
    const Vec3 rel = a.position_B - pad_center_B;
    if (std::abs(std::abs(rel.x()) - pad_length / 2.0) > 1e-9 ||
        std::abs(std::abs(rel.y()) - pad_width / 2.0) > 1e-9 || std::abs(a.position_B.z()) > 1e-9) {
      bad(id.str() + "not on a corner of the pad rectangle");
    }
    for (int j = 0; j < i; ++j) {
      if ((anchors[j].position_B - a.position_B).norm() < 1e-9) bad(id.str() + "duplicate corner");
    }
  }
}

std::array<double, kAnchorCount> AnchorLayout::frequencies() const {
  std::array<double, kAnchorCount> f{};
  for (int i = 0; i < kAnchorCount; ++i) f[i] = anchors[i].frequency_hz;
  return f;
}

std::array<AnchorPlacement, kAnchorCount> anchors_in_world(const Pose& ugv_pose,
                                                           const AnchorLayout& layout) {
  std::array<AnchorPlacement, kAnchorCount> out{};
  for (int i = 0; i < kAnchorCount; ++i) {
    out[i].position = transform_point(ugv_pose, layout.anchors[i].position_B);
    out[i].axis = rotate_vector(ugv_pose, layout.anchors[i].axis_B).normalized();
  }
  return out;
}

}  // namespace magdock
