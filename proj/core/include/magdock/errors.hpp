#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magdock {

enum class ErrorCode {
  ContractViolation,
  NearFieldValidity,
  NyquistViolation,
  ConfigError,
  CalibrationSaturated,
  DegenerateGeometry,
  NoActiveAnchors,
  NumericalError,
  SensorFault,
  OutOfRange,
  LengthMismatch,
  NotLanded,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the dipole model when an observation point is too close to a coil.
class NearFieldError : public Error {
 public:
  NearFieldError(int anchor_index, double separation);

  int anchor_index() const noexcept { return anchor_index_; }
  double separation() const noexcept { return separation_; }

 private:
  int anchor_index_;
  double separation_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace magdock
