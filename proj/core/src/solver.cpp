#include "magdock/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "magdock/errors.hpp"

namespace magdock {

bool SearchBox::contains(const Vec3& x, double tol) const {
  for (int k = 0; k < 3; ++k) {
    if (x[k] < min[k] - tol || x[k] > max[k] + tol) return false;
  }
  return true;
}

Vec3 SearchBox::clamp(const Vec3& x) const { return x.cwiseMax(min).cwiseMin(max); }

void SearchBox::validate() const {
  if (!min.allFinite() || !max.allFinite() || !(min.array() < max.array()).all()) {
    fail(ErrorCode::ConfigError, "search box must satisfy min < max component-wise");
  }
}

void SolverOptions::validate() const {
  box.validate();
  if (!(initial_simplex_scale > 0.0)) fail(ErrorCode::ConfigError, "simplex scale must be > 0");
  if (!(tol_x > 0.0) || !(tol_f > 0.0)) fail(ErrorCode::ConfigError, "tolerances must be > 0");
  if (max_iters < 1) fail(ErrorCode::ConfigError, "max_iters must be >= 1");
  if (!(outlier_delta > 0.0)) fail(ErrorCode::ConfigError, "outlier_delta must be > 0");
  if (!(seed_radius >= 0.0)) fail(ErrorCode::ConfigError, "seed_radius must be >= 0");
}

int MiEstimate::active_count() const {
  return static_cast<int>(std::count(active.begin(), active.end(), true));
}

MiEstimate initial_estimate(const CalibrationCoefficients& coeffs, double timestamp) {
  MiEstimate e;
  e.position_B = coeffs.reference_pose.position;
  e.active = kAllAnchors;
  e.accepted = true;
  e.converged = true;
  e.timestamp = timestamp;
  return e;
}

double cost(const Vec3& x, const AnchorVoltages& v_meas, const AnchorMask& active,
            const Vec3& rx_normal_B, const AnchorLayout& layout, const CoilParams& rx,
            const ReceiverChain& chain) {
  const auto model = forward_voltages_checked(x, rx_normal_B, layout, rx, chain);
  double sum = 0.0;
  for (int i = 0; i < kAnchorCount; ++i) {
    if (!active[i]) continue;
    if (!model[i]) {
      sum += kNearFieldPenalty;
      continue;
    }
    const double r = *model[i] - v_meas[i];
    sum += r * r;
  }
  return sum;
}

namespace {

NelderMeadResult nelder_mead_pass(const Objective& objective, const Vec3& x0,
                                  const SolverOptions& opts, int budget) {
  constexpr int kDim = 3;
  std::array<Vec3, kDim + 1> v;
  std::array<double, kDim + 1> f{};

  v[0] = opts.box.clamp(x0);
  for (int k = 0; k < kDim; ++k) {
    Vec3 step = Vec3::Zero();
    step[k] = opts.initial_simplex_scale;
    Vec3 candidate = opts.box.clamp(v[0] + step);
    // Flip the step when the start sits on the upper face.
    if ((candidate - v[0]).norm() < 0.5 * opts.initial_simplex_scale) {
      candidate = opts.box.clamp(v[0] - step);
    }
    v[k + 1] = candidate;
  }
  for (int k = 0; k <= kDim; ++k) f[k] = objective(v[k]);

  std::array<int, kDim + 1> order{};
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    std::array<Vec3, kDim + 1> vs;
    std::array<double, kDim + 1> fs{};
    for (int k = 0; k <= kDim; ++k) {
      vs[k] = v[order[k]];
      fs[k] = f[order[k]];
    }
    v = vs;
    f = fs;
  };

  NelderMeadResult result;
  int iter = 0;
  for (;; ++iter) {
    sort_simplex();
    double diameter = 0.0;
    for (int k = 1; k <= kDim; ++k) diameter = std::max(diameter, (v[k] - v[0]).norm());
    const double spread = f[kDim] - f[0];
    if (diameter < opts.tol_x || spread < opts.tol_f) {
      result.converged = true;
      break;
    }
    if (iter >= budget) break;

    Vec3 centroid = Vec3::Zero();
    for (int k = 0; k < kDim; ++k) centroid += v[k];
    centroid /= kDim;
    const Vec3& worst = v[kDim];

    const Vec3 xr = opts.box.clamp(centroid + (centroid - worst));
    const double fr = objective(xr);
    if (fr < f[0]) {
      const Vec3 xe = opts.box.clamp(centroid + 2.0 * (centroid - worst));
      const double fe = objective(xe);
      if (fe < fr) {
        v[kDim] = xe;
        f[kDim] = fe;
      } else {
        v[kDim] = xr;
        f[kDim] = fr;
      }
      continue;
    }
    if (fr < f[kDim - 1]) {
      v[kDim] = xr;
      f[kDim] = fr;
      continue;
    }
    bool shrink = false;
    if (fr < f[kDim]) {
      const Vec3 xc = opts.box.clamp(centroid + 0.5 * (xr - centroid));
      const double fc = objective(xc);
      if (fc <= fr) {
        v[kDim] = xc;
        f[kDim] = fc;
      } else {
        shrink = true;
      }
    } else {
      const Vec3 xc = opts.box.clamp(centroid + 0.5 * (worst - centroid));
      const double fc = objective(xc);
      if (fc < f[kDim]) {
        v[kDim] = xc;
        f[kDim] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (int k = 1; k <= kDim; ++k) {
        v[k] = v[0] + 0.5 * (v[k] - v[0]);
        f[k] = objective(v[k]);
      }
    }
  }
  result.x = v[0];
  result.f = f[0];
  result.iterations = iter;
  return result;
}

constexpr int kMaxRestarts = 3;

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, const Vec3& x0,
                             const SolverOptions& opts) {
  if (!opts.box.contains(x0, 1e-12)) {
    fail(ErrorCode::ContractViolation, "Nelder-Mead start point lies outside the search box");
  }
  NelderMeadResult best = nelder_mead_pass(objective, x0, opts, opts.max_iters);
  int used = best.iterations;
  // A simplex squeezed flat against a box face cannot leave it; restart from the
  // best vertex until a fresh simplex no longer improves.
  for (int r = 0; r < kMaxRestarts && best.converged && used < opts.max_iters; ++r) {
    const NelderMeadResult next = nelder_mead_pass(objective, best.x, opts, opts.max_iters - used);
    used += next.iterations;
    const bool improved =
        next.f < best.f - opts.tol_f && (next.x - best.x).norm() >= opts.tol_x;
    if (next.f <= best.f) best = next;
    if (!improved) break;
  }
  best.iterations = used;
  return best;
}

MiEstimate estimate_position(const SpectralAmplitudes& raw, const CalibrationCoefficients& coeffs,
                             const MiEstimate& prev, const Vec3& rx_normal_B,
                             const AnchorLayout& layout, const CoilParams& rx,
                             const ReceiverChain& chain, const SolverOptions& opts,
                             double timestamp) {
  const SpectralAmplitudes meas = apply_calibration(raw, coeffs);
  AnchorMask active{};
  for (int i = 0; i < kAnchorCount; ++i) active[i] = !meas.saturated[i];
  if (std::none_of(active.begin(), active.end(), [](bool a) { return a; })) {
    fail(ErrorCode::NoActiveAnchors, "every anchor is saturated");
  }

  const Vec3 start = opts.box.clamp(prev.position_B);
  const Objective objective = [&](const Vec3& x) {
    return cost(x, meas.amplitude, active, rx_normal_B, layout, rx, chain);
  };
  NelderMeadResult nm = nelder_mead(objective, start, opts);
  if (opts.seed_radius > 0.0) {
    // Extra seeds around the warm start guard against nearby spurious minima.
    for (int axis = 0; axis < 3; ++axis) {
      for (const double sign : {-1.0, 1.0}) {
        const Vec3 seed = opts.box.clamp(start + sign * opts.seed_radius * Vec3::Unit(axis));
        const NelderMeadResult alt = nelder_mead(objective, seed, opts);
        if (alt.f < nm.f) nm = alt;
      }
    }
  }

  MiEstimate est;
  est.residual = nm.f;
  est.active = active;
  est.iterations = nm.iterations;
  est.converged = nm.converged;
  est.timestamp = timestamp;
  if ((nm.x - prev.position_B).norm() < opts.outlier_delta) {
    est.position_B = nm.x;
    est.accepted = true;
    est.consecutive_rejections = 0;
  } else {
    est.position_B = prev.position_B;
    est.accepted = false;
    est.consecutive_rejections = prev.consecutive_rejections + 1;
  }
  return est;
}

}  // namespace magdock
