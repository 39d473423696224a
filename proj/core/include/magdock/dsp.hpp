#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "magdock/geometry.hpp"

namespace magdock {

struct AdcConfig {
  double sample_rate = 518e3;  // Hz
  int bits = 12;
  double full_scale = 3.0;  // V, peak-to-peak input range
  int frame_length = 4096;  // samples, power of two

  double lsb() const;
  int max_code() const { return (1 << bits) - 1; }
  int mid_code() const { return 1 << (bits - 1); }
  double bin_width() const { return sample_rate / frame_length; }
  // Default amplitude-domain saturation threshold: 95% of the half range.
  double default_saturation_threshold() const { return 0.95 * full_scale / 2.0; }
  void validate() const;
};

struct SampleFrame {
  std::vector<std::uint16_t> samples;  // ADC codes
  double timestamp = 0.0;              // s
  int clipped_count = 0;
};

struct SpectralAmplitudes {
  std::array<double, kAnchorCount> amplitude{};  // V, peak, window-corrected
  std::array<bool, kAnchorCount> saturated{};
};

struct ParabolicPeak {
  double delta_bins = 0.0;
  double magnitude = 0.0;
};

using ToneArray = std::array<double, kAnchorCount>;

// Superposition of four tones plus white gaussian noise, offset to mid-scale and
// quantized. Deterministic for a given seed.
SampleFrame synthesize_frame(const ToneArray& amplitudes, const ToneArray& frequencies,
                             const ToneArray& phases, const AdcConfig& adc, double noise_sigma,
                             std::uint64_t rng_seed, double timestamp = 0.0);

// Three-point parabolic vertex on linear magnitudes.
ParabolicPeak parabolic_interp(double mag_left, double mag_peak, double mag_right);

// Per-anchor tone amplitude via a flattop-windowed FFT. The peak bin magnitude is
// corrected by the window response at the interpolated offset.
//
// An anchor is flagged saturated when its amplitude exceeds v_sat_thresh, or when the
// frame hit a rail and that anchor carries at least half of the strongest tone.
SpectralAmplitudes extract_amplitudes(const SampleFrame& frame, const ToneArray& frequencies,
                                      const AdcConfig& adc, double v_sat_thresh);

// 5-term flattop, periodic form.
std::vector<double> flattop_window(int length);

// |W(delta)| / W(0) for the flattop window of the given length.
double flattop_response(int length, double delta_bins);

int count_rail_samples(std::span<const std::uint16_t> codes, const AdcConfig& adc);

// Replay format: per frame an 8-byte header ("MIFR", bits u16 LE, frame_length u16 LE)
// followed by frame_length little-endian u16 codes.
void write_frames(std::ostream& os, std::span<const SampleFrame> frames, const AdcConfig& adc);
std::vector<SampleFrame> read_frames(std::istream& is, const AdcConfig& adc);

}  // namespace magdock
