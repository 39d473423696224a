#pragma once

#include <array>
#include <functional>

#include "magdock/calibration.hpp"
#include "magdock/dsp.hpp"
#include "magdock/geometry.hpp"
#include "magdock/magnetics.hpp"

namespace magdock {

// Box constraint over the valid flight volume, in {B}.
struct SearchBox {
  Vec3 min{-1.0, -1.0, 0.0};
  Vec3 max{1.0, 1.0, 1.2};

  bool contains(const Vec3& x, double tol = 0.0) const;
  Vec3 clamp(const Vec3& x) const;
  void validate() const;
};

struct SolverOptions {
  SearchBox box{};
  double initial_simplex_scale = 0.02;  // m
  double tol_x = 1e-4;                  // m, simplex diameter
  double tol_f = 1e-18;                 // V^2, cost spread across vertices
  int max_iters = 500;
  double outlier_delta = 0.30;  // m
  double seed_radius = 0.02;    // m, axis seeds around the warm start; 0 disables

  void validate() const;
};

using AnchorMask = std::array<bool, kAnchorCount>;

inline constexpr AnchorMask kAllAnchors{true, true, true, true};

struct MiEstimate {
  Vec3 position_B = Vec3::Zero();
  double residual = 0.0;  // V^2
  AnchorMask active{};
  bool accepted = false;
  bool converged = false;
  int iterations = 0;
  int consecutive_rejections = 0;
  double timestamp = 0.0;

  int active_count() const;
};

// Seed estimate for the first solver call: the calibration reference position.
MiEstimate initial_estimate(const CalibrationCoefficients& coeffs, double timestamp = 0.0);

// Cost assigned to an active anchor whose validity radius contains x.
inline constexpr double kNearFieldPenalty = 1e3;  // V^2

// Sum of squared residuals between model and calibrated voltages over the active set.
double cost(const Vec3& x, const AnchorVoltages& v_meas, const AnchorMask& active,
            const Vec3& rx_normal_B, const AnchorLayout& layout, const CoilParams& rx,
            const ReceiverChain& chain);

struct NelderMeadResult {
  Vec3 x = Vec3::Zero();
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Vec3&)>;

// Box-clamped Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
// A pass stops when the simplex diameter drops below tol_x or the cost spread drops
// below tol_f. Converged passes are restarted from the best vertex while that still
// improves; max_iters bounds the total across passes (converged = false when hit).
NelderMeadResult nelder_mead(const Objective& objective, const Vec3& x0,
                             const SolverOptions& opts);

// One runtime localization cycle. Saturated anchors leave the cost; the simplex is
// warm-started at prev and at six axis seeds seed_radius away, keeping the lowest cost; the result is rejected when it jumps more than
// outlier_delta from prev. Throws NoActiveAnchors when every anchor is saturated.
MiEstimate estimate_position(const SpectralAmplitudes& raw, const CalibrationCoefficients& coeffs,
                             const MiEstimate& prev, const Vec3& rx_normal_B,
                             const AnchorLayout& layout, const CoilParams& rx,
                             const ReceiverChain& chain, const SolverOptions& opts,
                             double timestamp = 0.0);

}  // namespace magdock
