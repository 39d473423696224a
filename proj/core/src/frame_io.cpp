#include <array>
#include <istream>
#include <ostream>

#include "magdock/dsp.hpp"
#include "magdock/errors.hpp"

namespace magdock {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'I', 'F', 'R'};

void put_u16(std::ostream& os, std::uint16_t v) {
  const char bytes[2] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF)};
  os.write(bytes, 2);
}

bool get_u16(std::istream& is, std::uint16_t& v) {
  unsigned char bytes[2];
  if (!is.read(reinterpret_cast<char*>(bytes), 2)) return false;
  v = static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
  return true;
}

}  // namespace

void write_frames(std::ostream& os, std::span<const SampleFrame> frames, const AdcConfig& adc) {
  adc.validate();
  if (adc.frame_length > 0xFFFF) fail(ErrorCode::ConfigError, "frame length exceeds 16 bits");
  for (const auto& frame : frames) {
    if (static_cast<int>(frame.samples.size()) != adc.frame_length) {
      fail(ErrorCode::ContractViolation, "frame length does not match the ADC configuration");
    }
    os.write(kMagic.data(), kMagic.size());
    put_u16(os, static_cast<std::uint16_t>(adc.bits));
    put_u16(os, static_cast<std::uint16_t>(adc.frame_length));
    for (std::uint16_t code : frame.samples) put_u16(os, code);
  }
  if (!os) fail(ErrorCode::IoError, "failed writing sample frames");
}

std::vector<SampleFrame> read_frames(std::istream& is, const AdcConfig& adc) {
  std::vector<SampleFrame> frames;
  while (true) {
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size())) {
      if (is.gcount() == 0) break;
      fail(ErrorCode::IoError, "truncated frame header");
    }
    if (magic != kMagic) fail(ErrorCode::IoError, "bad frame magic");
    std::uint16_t bits = 0;
    std::uint16_t length = 0;
    if (!get_u16(is, bits) || !get_u16(is, length)) fail(ErrorCode::IoError, "truncated frame header");
    if (bits != adc.bits || length != adc.frame_length) {
      fail(ErrorCode::ConfigError, "frame header does not match the ADC configuration");
    }
    SampleFrame frame;
    frame.samples.resize(length);
    for (auto& code : frame.samples) {
      if (!get_u16(is, code)) fail(ErrorCode::IoError, "truncated frame payload");
      if (code > adc.max_code()) fail(ErrorCode::IoError, "code exceeds ADC range");
    }
    frame.clipped_count = count_rail_samples(frame.samples, adc);
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace magdock
