#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "magdock/dsp.hpp"
#include "magdock/errors.hpp"
#include "magdock/system.hpp"

namespace magdock {
namespace {

const AdcConfig kAdc{};
const ToneArray kFreqs = AnchorLayout::standard().frequencies();
constexpr double kVsat = 1.425;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ContractViolation;
}

double bin_freq(double bin) { return bin * kAdc.bin_width(); }

TEST(AdcConfig, DefaultsAndDerivedValues) {
  EXPECT_DOUBLE_EQ(kAdc.sample_rate, 518e3);
  EXPECT_EQ(kAdc.bits, 12);
  EXPECT_EQ(kAdc.max_code(), 4095);
  EXPECT_EQ(kAdc.mid_code(), 2048);
  EXPECT_NEAR(kAdc.bin_width(), 126.46484375, 1e-12);
  EXPECT_DOUBLE_EQ(kAdc.default_saturation_threshold(), 1.425);
  AdcConfig bad = kAdc;
  bad.frame_length = 1000;
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::ConfigError);
}

TEST(SynthesizeFrame, SilentFrameSitsAtMidScale) {
  const SampleFrame f = synthesize_frame({0, 0, 0, 0}, kFreqs, {0, 0, 0, 0}, kAdc, 0.0, 1);
  ASSERT_EQ(static_cast<int>(f.samples.size()), kAdc.frame_length);
  for (auto c : f.samples) EXPECT_EQ(c, 2048);
  EXPECT_EQ(f.clipped_count, 0);
}

TEST(SynthesizeFrame, OverRangeToneClips) {
  const SampleFrame f = synthesize_frame({1.6, 0, 0, 0}, kFreqs, {0, 0, 0, 0}, kAdc, 0.0, 1);
  EXPECT_GT(f.clipped_count, 0);
  EXPECT_EQ(f.clipped_count, count_rail_samples(f.samples, kAdc));
  for (auto c : f.samples) EXPECT_LE(c, 4095);
}

TEST(SynthesizeFrame, NyquistAndNegativeAmplitudeRejected) {
  ToneArray f = kFreqs;
  f[3] = 300e3;
  EXPECT_EQ(code_of([&] { synthesize_frame({0.1, 0, 0, 0}, f, {}, kAdc, 0.0, 1); }),
            ErrorCode::NyquistViolation);
  EXPECT_EQ(code_of([&] { synthesize_frame({-0.1, 0, 0, 0}, kFreqs, {}, kAdc, 0.0, 1); }),
            ErrorCode::ContractViolation);
}

TEST(SynthesizeFrame, DeterministicPerSeedProperty) {
  for (std::uint64_t seed : {1ULL, 7ULL, 12345ULL}) {
    const auto a = synthesize_frame({0.1, 0.05, 0.02, 0.2}, kFreqs, {0.1, 1, 2, 3}, kAdc, 0.01, seed);
    const auto b = synthesize_frame({0.1, 0.05, 0.02, 0.2}, kFreqs, {0.1, 1, 2, 3}, kAdc, 0.01, seed);
    EXPECT_EQ(a.samples, b.samples);
  }
  const auto a = synthesize_frame({0.1, 0, 0, 0}, kFreqs, {}, kAdc, 0.01, 1);
  const auto b = synthesize_frame({0.1, 0, 0, 0}, kFreqs, {}, kAdc, 0.01, 2);
  EXPECT_NE(a.samples, b.samples);
}

TEST(ParabolicInterp, SymmetricNeighbours) {
  const auto p = parabolic_interp(0.5, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(p.delta_bins, 0.0);
  EXPECT_DOUBLE_EQ(p.magnitude, 1.0);
}

TEST(ParabolicInterp, WorkedExample) {
  const auto p = parabolic_interp(0.2, 1.0, 0.6);
  EXPECT_NEAR(p.delta_bins, 0.16666666666666663, 1e-12);
  EXPECT_NEAR(p.magnitude, 1.0166666666666666, 1e-12);
}

TEST(ParabolicInterp, FlatTripleIsDegenerate) {
  const auto p = parabolic_interp(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(p.delta_bins, 0.0);
  EXPECT_DOUBLE_EQ(p.magnitude, 1.0);
}

TEST(FlattopWindow, CoherentSumAndResponseMatchOracle) {
  const auto w = flattop_window(4096);
  double sum = 0.0;
  for (double v : w) sum += v;
  EXPECT_NEAR(sum, 883.0113792, 1e-6);
  EXPECT_NEAR(flattop_response(4096, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(flattop_response(4096, 0.25), 1.000261434827363, 1e-9);
  EXPECT_NEAR(flattop_response(4096, 0.5), 0.9988748928294453, 1e-9);
}

TEST(ExtractAmplitudes, BinCentredToneRoundTrip) {
  ToneArray f = kFreqs;
  f[0] = bin_freq(1600.0);
  const auto frame = synthesize_frame({0.1, 0, 0, 0}, f, {0.3, 0, 0, 0}, kAdc, 0.0, 1);
  const auto a = extract_amplitudes(frame, f, kAdc, kVsat);
  EXPECT_NEAR(a.amplitude[0], 0.1, 0.002 * 0.1);
  EXPECT_FALSE(a.saturated[0]);
}

TEST(ExtractAmplitudes, FourToneRoundTrip) {
  const ToneArray amps{0.3, 0.12, 0.05, 0.2};
  const auto frame = synthesize_frame(amps, kFreqs, {0.1, 1.1, 2.1, 3.1}, kAdc, 0.0, 1);
  const auto a = extract_amplitudes(frame, kFreqs, kAdc, kVsat);
  for (int i = 0; i < kAnchorCount; ++i) EXPECT_NEAR(a.amplitude[i], amps[i], 0.002 * amps[i]);
}

TEST(ExtractAmplitudes, OffBinSweepStaysWithinScallopingBound) {
  for (double frac = 0.0; frac <= 1.0001; frac += 0.05) {
    ToneArray f = kFreqs;
    f[1] = bin_freq(1500.0 + frac);
    const auto frame = synthesize_frame({0, 0.4, 0, 0}, f, {0, 0.7, 0, 0}, kAdc, 0.0, 1);
    const auto a = extract_amplitudes(frame, f, kAdc, kVsat);
    EXPECT_NEAR(a.amplitude[1], 0.4, 0.002 * 0.4) << "fractional offset " << frac;
  }
}

TEST(ExtractAmplitudes, ClippedFrameFlagsDominantTone) {
  const auto frame = synthesize_frame({1.6, 0.02, 0.02, 0.02}, kFreqs, {}, kAdc, 0.0, 1);
  ASSERT_GT(frame.clipped_count, 0);
  const auto a = extract_amplitudes(frame, kFreqs, kAdc, kVsat);
  EXPECT_TRUE(a.saturated[0]);
  EXPECT_FALSE(a.saturated[1]);
}

TEST(ExtractAmplitudes, ThresholdFlagsWithoutClipping) {
  const auto frame = synthesize_frame({1.44, 0.0, 0.0, 0.0}, kFreqs, {}, kAdc, 0.0, 1);
  ASSERT_EQ(frame.clipped_count, 0);
  const auto a = extract_amplitudes(frame, kFreqs, kAdc, kVsat);
  EXPECT_TRUE(a.saturated[0]);
  EXPECT_FALSE(a.saturated[2]);
}

TEST(ExtractAmplitudes, ContractErrors) {
  SampleFrame shortf;
  shortf.samples.assign(100, 2048);
  EXPECT_EQ(code_of([&] { extract_amplitudes(shortf, kFreqs, kAdc, kVsat); }),
            ErrorCode::ContractViolation);
  const auto frame = synthesize_frame({0, 0, 0, 0}, kFreqs, {}, kAdc, 0.0, 1);
  ToneArray close = kFreqs;
  close[1] = close[0] + 2.0 * kAdc.bin_width();
  EXPECT_EQ(code_of([&] { extract_amplitudes(frame, close, kAdc, kVsat); }), ErrorCode::ConfigError);
  ToneArray above = kFreqs;
  above[0] = 260e3;
  EXPECT_EQ(code_of([&] { extract_amplitudes(frame, above, kAdc, kVsat); }),
            ErrorCode::NyquistViolation);
}

TEST(ExtractAmplitudes, FortyDbRoundTripProperty) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> amp(0.02, 0.3), ph(0.0, 2 * M_PI), off(-0.5, 0.5);
  for (int n = 0; n < 40; ++n) {
    ToneArray a{}, p{}, f{};
    double smallest = 1.0;
    for (int i = 0; i < kAnchorCount; ++i) {
      a[i] = amp(rng);
      p[i] = ph(rng);
      f[i] = kFreqs[i] + off(rng) * kAdc.bin_width();
      smallest = std::min(smallest, a[i]);
    }
    // 40 dB per-tone SNR for the weakest tone: sigma = A / sqrt(2) / 100.
    const double sigma = smallest / std::sqrt(2.0) / 100.0;
    const auto frame = synthesize_frame(a, f, p, kAdc, sigma, rng());
    const auto r = extract_amplitudes(frame, f, kAdc, kVsat);
    for (int i = 0; i < kAnchorCount; ++i) EXPECT_NEAR(r.amplitude[i], a[i], 0.01 * a[i]);
  }
}

TEST(ExtractAmplitudes, PhaseInvarianceProperty) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> ph(0.0, 2 * M_PI);
  const ToneArray a{0.25, 0.1, 0.05, 0.15};
  ToneArray f = kFreqs;
  f[2] += 0.37 * kAdc.bin_width();
  const auto ref = extract_amplitudes(synthesize_frame(a, f, {}, kAdc, 0.0, 1), f, kAdc, kVsat);
  for (int n = 0; n < 30; ++n) {
    const ToneArray p{ph(rng), ph(rng), ph(rng), ph(rng)};
    const auto r = extract_amplitudes(synthesize_frame(a, f, p, kAdc, 0.0, 1), f, kAdc, kVsat);
    for (int i = 0; i < kAnchorCount; ++i) {
      EXPECT_NEAR(r.amplitude[i], ref.amplitude[i], 0.002 * ref.amplitude[i]);
    }
  }
}

TEST(ExtractAmplitudes, QuantizationFloorProperty) {
  const double lsb = kAdc.lsb();
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> ph(0.0, 2 * M_PI), off(0.0, 1.0);
  for (double lsbs : {100.0, 150.0, 300.0}) {
    ToneArray f = kFreqs;
    f[0] += off(rng) * kAdc.bin_width();
    const double a = lsbs * lsb;
    const auto r = extract_amplitudes(
        synthesize_frame({a, 0, 0, 0}, f, {ph(rng), 0, 0, 0}, kAdc, 0.0, 1), f, kAdc, kVsat);
    EXPECT_NEAR(r.amplitude[0], a, 0.01 * a);
  }
}

TEST(FrameIo, ReplayRoundTrip) {
  std::vector<SampleFrame> frames;
  for (int k = 0; k < 3; ++k) {
    frames.push_back(synthesize_frame({0.1, 0.2, 0.3, 0.05}, kFreqs, {}, kAdc, 0.01, 100 + k));
  }
  std::stringstream ss;
  write_frames(ss, frames, kAdc);
  EXPECT_EQ(ss.str().size(), 3u * (8u + 2u * 4096u));
  EXPECT_EQ(ss.str().substr(0, 4), "MIFR");
  const auto back = read_frames(ss, kAdc);
  ASSERT_EQ(back.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(back[k].samples, frames[k].samples);
    EXPECT_EQ(back[k].clipped_count, frames[k].clipped_count);
  }
}

TEST(FrameIo, CorruptHeaderRejected) {
  std::stringstream ss("XXXX\x0c\x00\x00\x10");
  EXPECT_EQ(code_of([&] { read_frames(ss, kAdc); }), ErrorCode::IoError);
}

}  // namespace
}  // namespace magdock
