#include "magdock/errors.hpp"

#include <sstream>

namespace magdock {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::NearFieldValidity: return "NearFieldValidity";
    case ErrorCode::NyquistViolation: return "NyquistViolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::CalibrationSaturated: return "CalibrationSaturated";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::NoActiveAnchors: return "NoActiveAnchors";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::SensorFault: return "SensorFault";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotLanded: return "NotLanded";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {
std::string near_field_message(int anchor_index, double separation) {
  std::ostringstream os;
  os << "anchor " << anchor_index + 1 << " at " << separation
     << " m is inside the dipole validity radius";
  return os.str();
}
}  // namespace

NearFieldError::NearFieldError(int anchor_index, double separation)
    : Error(ErrorCode::NearFieldValidity, near_field_message(anchor_index, separation)),
      anchor_index_(anchor_index),
      separation_(separation) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace magdock
