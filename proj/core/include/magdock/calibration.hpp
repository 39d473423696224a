#pragma once

#include <span>

#include "magdock/dsp.hpp"
#include "magdock/geometry.hpp"
#include "magdock/magnetics.hpp"

namespace magdock {

inline constexpr int kDefaultCalibrationFrames = 32;

struct CalibrationCoefficients {
  std::array<double, kAnchorCount> c{1.0, 1.0, 1.0, 1.0};
  Pose reference_pose{};
  int n_cal = 1;

  void validate() const;
};

// Static gain identification: averages the raw tone amplitudes over all frames and
// divides by the model voltage at the reference pose. The receiver is assumed to sit
// at x_ref with the given attitude for the whole capture.
//
// Throws CalibrationSaturated if any frame flags an anchor, DegenerateGeometry if a
// model voltage is below the numeric floor.
CalibrationCoefficients calibrate(std::span<const SampleFrame> frames, const Vec3& x_ref,
                                  const Pose& attitude_ref, const AnchorLayout& layout,
                                  const CoilParams& rx, const ReceiverChain& chain,
                                  const AdcConfig& adc, double v_sat_thresh,
                                  const Vec3& rx_normal_T = Vec3::UnitZ());

SpectralAmplitudes apply_calibration(const SpectralAmplitudes& raw,
                                     const CalibrationCoefficients& coeffs);

}  // namespace magdock
