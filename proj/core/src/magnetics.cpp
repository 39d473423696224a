#include "magdock/magnetics.hpp"

#include <cmath>

#include "magdock/errors.hpp"

namespace magdock {

CoilParams CoilParams::circular(int turns, double radius) {
  return {turns, std::numbers::pi * radius * radius, radius};
}

void CoilParams::validate() const {
  if (turns < 1) fail(ErrorCode::ConfigError, "coil turns must be >= 1");
  if (!(area > 0.0)) fail(ErrorCode::ConfigError, "coil area must be positive");
  if (radius > 0.0 && std::abs(area - std::numbers::pi * radius * radius) > 1e-9) {
    fail(ErrorCode::ConfigError, "coil area inconsistent with radius");
  }
}

void ReceiverChain::validate() const {
  if (fixed_stage != 10.0) fail(ErrorCode::ConfigError, "fixed gain stage is 10x");
  if (!(programmable_stage >= 1.0 && programmable_stage <= 100.0)) {
    fail(ErrorCode::ConfigError, "programmable gain must be in [1, 100]");
  }
}

double magnetic_moment(const CoilParams& coil, double current_amplitude) {
  if (!(current_amplitude > 0.0)) {
    fail(ErrorCode::ContractViolation, "drive current amplitude must be positive");
  }
  return static_cast<double>(coil.turns) * current_amplitude * coil.area;
}

std::optional<FieldVector> try_dipole_field(double moment_magnitude, const Vec3& axis,
                                            const Vec3& tx_pos, const Vec3& obs_pos,
                                            double min_range) {
  const Vec3 r = obs_pos - tx_pos;
  const double dist = r.norm();
  if (!(dist >= min_range) || dist == 0.0) return std::nullopt;
  const Vec3 r_hat = r / dist;
  const Vec3 m = moment_magnitude * axis;
  const double scale = kMu0 / (4.0 * std::numbers::pi * dist * dist * dist);
  return FieldVector{scale * (3.0 * m.dot(r_hat) * r_hat - m)};
}

FieldVector dipole_field(double moment_magnitude, const Vec3& axis, const Vec3& tx_pos,
                         const Vec3& obs_pos, double min_range) {
  auto b = try_dipole_field(moment_magnitude, axis, tx_pos, obs_pos, min_range);
  if (!b) throw NearFieldError(-1, (obs_pos - tx_pos).norm());
  return *b;
}

double induced_voltage(const FieldVector& b, const Vec3& rx_normal, const CoilParams& rx_coil,
                       const ReceiverChain& chain, double frequency) {
  if (!(frequency > 0.0)) fail(ErrorCode::ContractViolation, "frequency must be positive");
  const double transduction = 2.0 * std::numbers::pi * frequency * rx_coil.turns * rx_coil.area;
  return chain.gain() * transduction * std::abs(b.b.dot(rx_normal));
}

CoilParams transmit_coil(const AnchorConfig& anchor) {
  return {anchor.turns, anchor.area, 0.0};
}

std::array<std::optional<double>, kAnchorCount> forward_voltages_checked(
    const Vec3& x_B, const Vec3& rx_normal_B, const AnchorLayout& layout,
    const CoilParams& rx_coil, const ReceiverChain& chain) {
  std::array<std::optional<double>, kAnchorCount> out{};
  for (int i = 0; i < kAnchorCount; ++i) {
    const auto& a = layout.anchors[i];
    const double m = magnetic_moment(transmit_coil(a), a.drive_current_amplitude);
    const auto b = try_dipole_field(m, a.axis_B, a.position_B, x_B);
    if (b) out[i] = induced_voltage(*b, rx_normal_B, rx_coil, chain, a.frequency_hz);
  }
  return out;
}

AnchorVoltages forward_voltages(const Vec3& x_B, const Vec3& rx_normal_B,
                                const AnchorLayout& layout, const CoilParams& rx_coil,
                                const ReceiverChain& chain) {
  const auto checked = forward_voltages_checked(x_B, rx_normal_B, layout, rx_coil, chain);
  AnchorVoltages v{};
  for (int i = 0; i < kAnchorCount; ++i) {
    if (!checked[i]) throw NearFieldError(i, (x_B - layout.anchors[i].position_B).norm());
    v[i] = *checked[i];
  }
  return v;
}

}  // namespace magdock
