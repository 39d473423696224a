#include "magdock/calibration.hpp"

#include <cmath>
#include <sstream>

#include "magdock/errors.hpp"
#include "magdock/system.hpp"

namespace magdock {

namespace {
constexpr double kModelVoltageFloor = 1e-12;  // V
}

void MiSystem::validate() const {
  layout.validate();
  rx_coil.validate();
  chain.validate();
  adc.validate();
  if (!is_unit(rx_normal_T)) fail(ErrorCode::ConfigError, "receiver normal must be unit length");
  if (!(v_sat_thresh > 0.0)) fail(ErrorCode::ConfigError, "saturation threshold must be positive");
}

void CalibrationCoefficients::validate() const {
  for (double ci : c) {
    if (!std::isfinite(ci) || !(ci > 0.0)) {
      fail(ErrorCode::ConfigError, "calibration coefficients must be positive and finite");
    }
  }
  if (n_cal < 1) fail(ErrorCode::ConfigError, "n_cal must be >= 1");
  if (!reference_pose.valid()) fail(ErrorCode::ConfigError, "invalid calibration reference pose");
}

CalibrationCoefficients calibrate(std::span<const SampleFrame> frames, const Vec3& x_ref,
                                  const Pose& attitude_ref, const AnchorLayout& layout,
                                  const CoilParams& rx, const ReceiverChain& chain,
                                  const AdcConfig& adc, double v_sat_thresh,
                                  const Vec3& rx_normal_T) {
  if (frames.empty()) fail(ErrorCode::ContractViolation, "calibration needs at least one frame");
  const auto freqs = layout.frequencies();

  std::array<double, kAnchorCount> mean{};
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto raw = extract_amplitudes(frames[k], freqs, adc, v_sat_thresh);
    for (int i = 0; i < kAnchorCount; ++i) {
      if (raw.saturated[i]) {
        std::ostringstream os;
        os << "frame " << k << " saturates anchor " << i + 1;
        fail(ErrorCode::CalibrationSaturated, os.str());
      }
      mean[i] += raw.amplitude[i];
    }
  }
  for (double& m : mean) m /= static_cast<double>(frames.size());

  const Vec3 n_B = receiver_normal_in_B(attitude_ref, rx_normal_T);
  AnchorVoltages model{};
  try {
    model = forward_voltages(x_ref, n_B, layout, rx, chain);
  } catch (const NearFieldError& e) {
    fail(ErrorCode::DegenerateGeometry, e.what());
  }

  CalibrationCoefficients out;
  out.reference_pose = Pose{x_ref, attitude_ref.orientation.normalized()};
  out.n_cal = static_cast<int>(frames.size());
  for (int i = 0; i < kAnchorCount; ++i) {
    if (!(model[i] > kModelVoltageFloor)) {
      std::ostringstream os;
      os << "model voltage of anchor " << i + 1 << " vanishes at the reference pose";
      fail(ErrorCode::DegenerateGeometry, os.str());
    }
    out.c[i] = mean[i] / model[i];
    if (!(out.c[i] > 0.0) || !std::isfinite(out.c[i])) {
      std::ostringstream os;
      os << "no usable signal from anchor " << i + 1 << " during calibration";
      fail(ErrorCode::DegenerateGeometry, os.str());
    }
  }
  return out;
}

SpectralAmplitudes apply_calibration(const SpectralAmplitudes& raw,
                                     const CalibrationCoefficients& coeffs) {
  SpectralAmplitudes out = raw;
  for (int i = 0; i < kAnchorCount; ++i) out.amplitude[i] = raw.amplitude[i] / coeffs.c[i];
  return out;
}

}  // namespace magdock
