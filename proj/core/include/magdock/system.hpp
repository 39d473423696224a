#pragma once

#include "magdock/dsp.hpp"
#include "magdock/geometry.hpp"
#include "magdock/magnetics.hpp"

namespace magdock {

// Fixed hardware description shared by calibration, the solver and the simulator.
struct MiSystem {
  AnchorLayout layout = AnchorLayout::standard();
  CoilParams rx_coil = CoilParams::circular(5, 0.019);
  ReceiverChain chain{};
  AdcConfig adc{};
  Vec3 rx_normal_T = Vec3::UnitZ();
  double v_sat_thresh = AdcConfig{}.default_saturation_threshold();

  static MiSystem standard() { return {}; }
  void validate() const;
};

}  // namespace magdock
