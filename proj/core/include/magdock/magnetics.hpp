#pragma once

#include <array>
#include <numbers>
#include <optional>

#include "magdock/geometry.hpp"

namespace magdock {

inline constexpr double kMu0 = 4.0 * std::numbers::pi * 1e-7;  // T*m/A
// Separation below which the compact-source approximation is not trusted.
inline constexpr double kMinDipoleRange = 0.06;  // m

struct CoilParams {
  int turns = 5;
  double area = 0.0;    // m^2
  double radius = 0.0;  // m, 0 when only the area is known

  static CoilParams circular(int turns, double radius);
  void validate() const;
};

struct ReceiverChain {
  double fixed_stage = 10.0;
  double programmable_stage = 100.0;  // 1..100

  double gain() const { return fixed_stage * programmable_stage; }
  void validate() const;
};

struct FieldVector {
  Vec3 b = Vec3::Zero();  // tesla, peak amplitude
};

// Scalar dipole moment N * I * A (A*m^2). Throws ContractViolation for I <= 0.
double magnetic_moment(const CoilParams& coil, double current_amplitude);

// Closed-form dipole field at obs_pos. Throws NearFieldError when the separation is
// below min_range.
FieldVector dipole_field(double moment_magnitude, const Vec3& axis, const Vec3& tx_pos,
                         const Vec3& obs_pos, double min_range = kMinDipoleRange);

// Non-throwing variant; nullopt inside the validity radius.
std::optional<FieldVector> try_dipole_field(double moment_magnitude, const Vec3& axis,
                                            const Vec3& tx_pos, const Vec3& obs_pos,
                                            double min_range = kMinDipoleRange);

// Peak voltage G * (2 pi f N A) * |b . n|.
double induced_voltage(const FieldVector& b, const Vec3& rx_normal, const CoilParams& rx_coil,
                       const ReceiverChain& chain, double frequency);

using AnchorVoltages = std::array<double, kAnchorCount>;

// Model voltage per anchor at x_B. Throws NearFieldError for the first anchor that
// violates the validity radius.
AnchorVoltages forward_voltages(const Vec3& x_B, const Vec3& rx_normal_B,
                                const AnchorLayout& layout, const CoilParams& rx_coil,
                                const ReceiverChain& chain);

// Per-anchor variant; an empty entry marks an anchor inside its validity radius.
std::array<std::optional<double>, kAnchorCount> forward_voltages_checked(
    const Vec3& x_B, const Vec3& rx_normal_B, const AnchorLayout& layout,
    const CoilParams& rx_coil, const ReceiverChain& chain);

CoilParams transmit_coil(const AnchorConfig& anchor);

}  // namespace magdock
