#include "magdock/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "magdock/errors.hpp"

namespace magdock {

namespace {

constexpr std::array<double, 5> kFlattopCoeffs{0.21557895, 0.41663158, 0.277263158, 0.083578947,
                                               0.006947368};

// The FFTW planner is not thread-safe; execution on fresh buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    in_.reset(fftw_alloc_real(static_cast<std::size_t>(n)));
    out_.reset(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(n, in_.get(), out_.get(), FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  double* input() { return in_.get(); }
  void execute() { fftw_execute(plan_); }
  double magnitude(int k) const {
    return std::hypot(out_.get()[k][0], out_.get()[k][1]);
  }

 private:
  int n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_{};
};

struct Workspace {
  std::unique_ptr<RealFft> fft;
  std::vector<double> window;
  double window_sum = 0.0;
};

Workspace& workspace_for(int n) {
  thread_local Workspace ws;
  if (!ws.fft || ws.fft->size() != n) {
    ws.fft = std::make_unique<RealFft>(n);
    ws.window = flattop_window(n);
    ws.window_sum = 0.0;
    for (double w : ws.window) ws.window_sum += w;
  }
  return ws;
}

void check_frequencies(const ToneArray& frequencies, const AdcConfig& adc) {
  for (double f : frequencies) {
    if (!(f > 0.0) || f >= adc.sample_rate / 2.0) {
      std::ostringstream os;
      os << "tone at " << f << " Hz is outside (0, Nyquist)";
      fail(ErrorCode::NyquistViolation, os.str());
    }
  }
}

}  // namespace

double AdcConfig::lsb() const { return full_scale / static_cast<double>(1 << bits); }

void AdcConfig::validate() const {
  if (!(sample_rate > 0.0)) fail(ErrorCode::ConfigError, "sample rate must be positive");
  if (bits < 2 || bits > 16) fail(ErrorCode::ConfigError, "ADC bits must be in [2, 16]");
  if (!(full_scale > 0.0)) fail(ErrorCode::ConfigError, "full scale must be positive");
  if (frame_length < 16 || (frame_length & (frame_length - 1)) != 0) {
    fail(ErrorCode::ConfigError, "frame length must be a power of two >= 16");
  }
}

std::vector<double> flattop_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int n = 0; n < length; ++n) {
    const double x = 2.0 * std::numbers::pi * n / length;
    double v = 0.0;
    for (std::size_t k = 0; k < kFlattopCoeffs.size(); ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      v += sign * kFlattopCoeffs[k] * std::cos(static_cast<double>(k) * x);
    }
    w[static_cast<std::size_t>(n)] = v;
  }
  return w;
}

double flattop_response(int length, double delta_bins) {
  // Sum of shifted Dirichlet kernels, one per cosine term.
  auto dirichlet = [length](double x) -> std::complex<double> {
    if (std::abs(x) < 1e-12) return {static_cast<double>(length), 0.0};
    const double num = std::sin(std::numbers::pi * x);
    const double den = std::sin(std::numbers::pi * x / length);
    const double phase = -std::numbers::pi * x * (length - 1) / length;
    return std::polar(num / den, phase);
  };
  std::complex<double> acc{};
  for (std::size_t k = 0; k < kFlattopCoeffs.size(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double c = sign * kFlattopCoeffs[k];
    if (k == 0) {
      acc += c * dirichlet(delta_bins);
    } else {
      const double kk = static_cast<double>(k);
      acc += 0.5 * c * (dirichlet(delta_bins - kk) + dirichlet(delta_bins + kk));
    }
  }
  return std::abs(acc) / (kFlattopCoeffs[0] * length);
}

int count_rail_samples(std::span<const std::uint16_t> codes, const AdcConfig& adc) {
  const int top = adc.max_code();
  return static_cast<int>(std::count_if(codes.begin(), codes.end(), [top](std::uint16_t c) {
    return c == 0 || static_cast<int>(c) == top;
  }));
}

SampleFrame synthesize_frame(const ToneArray& amplitudes, const ToneArray& frequencies,
                             const ToneArray& phases, const AdcConfig& adc, double noise_sigma,
                             std::uint64_t rng_seed, double timestamp) {
  adc.validate();
  check_frequencies(frequencies, adc);
  for (double a : amplitudes) {
    if (!(a >= 0.0)) fail(ErrorCode::ContractViolation, "tone amplitudes must be >= 0");
  }
  if (!(noise_sigma >= 0.0)) fail(ErrorCode::ContractViolation, "noise sigma must be >= 0");

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int n_samples = adc.frame_length;
  const double lsb = adc.lsb();
  const int top = adc.max_code();
  const double mid = adc.mid_code();

  SampleFrame frame;
  frame.timestamp = timestamp;
  frame.samples.resize(static_cast<std::size_t>(n_samples));
  for (int n = 0; n < n_samples; ++n) {
    double v = 0.0;
    for (int i = 0; i < kAnchorCount; ++i) {
      if (amplitudes[i] == 0.0) continue;
      // Reduce the cycle count before scaling by 2 pi to keep the argument small.
      const double cycles = frequencies[i] * n / adc.sample_rate;
      const double frac = cycles - std::floor(cycles);
      v += amplitudes[i] * std::sin(2.0 * std::numbers::pi * frac + phases[i]);
    }
    if (noise_sigma > 0.0) v += noise_sigma * gauss(rng);
    const double code = std::round(v / lsb + mid);
    frame.samples[static_cast<std::size_t>(n)] =
        static_cast<std::uint16_t>(std::clamp(code, 0.0, static_cast<double>(top)));
  }
  frame.clipped_count = count_rail_samples(frame.samples, adc);
  return frame;
}

ParabolicPeak parabolic_interp(double mag_left, double mag_peak, double mag_right) {
  const double denom = mag_left - 2.0 * mag_peak + mag_right;
  if (std::abs(denom) < 1e-300) return {0.0, mag_peak};
  double delta = 0.5 * (mag_left - mag_right) / denom;
  delta = std::clamp(delta, -0.5, 0.5);
  return {delta, mag_peak - 0.25 * (mag_left - mag_right) * delta};
}

SpectralAmplitudes extract_amplitudes(const SampleFrame& frame, const ToneArray& frequencies,
                                      const AdcConfig& adc, double v_sat_thresh) {
  adc.validate();
  if (static_cast<int>(frame.samples.size()) != adc.frame_length) {
    fail(ErrorCode::ContractViolation, "frame length does not match the ADC configuration");
  }
  check_frequencies(frequencies, adc);
  const double bin = adc.bin_width();
  for (int i = 0; i < kAnchorCount; ++i) {
    for (int j = 0; j < i; ++j) {
      if (std::abs(frequencies[i] - frequencies[j]) < 3.0 * bin) {
        fail(ErrorCode::ConfigError, "anchor frequencies closer than 3 FFT bins");
      }
    }
  }

  const int n = adc.frame_length;
  Workspace& ws = workspace_for(n);
  double* in = ws.fft->input();
  const double lsb = adc.lsb();
  const double mid = adc.mid_code();
  for (int k = 0; k < n; ++k) {
    in[k] = (static_cast<double>(frame.samples[static_cast<std::size_t>(k)]) - mid) * lsb *
            ws.window[static_cast<std::size_t>(k)];
  }
  ws.fft->execute();

  SpectralAmplitudes out;
  const int last_bin = n / 2 - 1;
  for (int i = 0; i < kAnchorCount; ++i) {
    const int nearest = static_cast<int>(std::lround(frequencies[i] / bin));
    int peak = std::clamp(nearest, 1, last_bin);
    for (int k = std::max(1, nearest - 1); k <= std::min(last_bin, nearest + 1); ++k) {
      if (ws.fft->magnitude(k) > ws.fft->magnitude(peak)) peak = k;
    }
    const double left = ws.fft->magnitude(peak - 1);
    const double centre = ws.fft->magnitude(peak);
    const double right = ws.fft->magnitude(peak + 1);
    const ParabolicPeak refined = parabolic_interp(left, centre, right);
    const double scallop = flattop_response(n, refined.delta_bins);
    out.amplitude[i] = 2.0 * centre / ws.window_sum / scallop;
  }

  const double strongest = *std::max_element(out.amplitude.begin(), out.amplitude.end());
  for (int i = 0; i < kAnchorCount; ++i) {
    const bool over = out.amplitude[i] > v_sat_thresh;
    const bool clipped = frame.clipped_count > 0 && out.amplitude[i] >= 0.5 * strongest;
    out.saturated[i] = over || clipped;
  }
  return out;
}

}  // namespace magdock
