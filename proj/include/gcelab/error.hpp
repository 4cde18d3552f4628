#pragma once

#include <stdexcept>
#include <string>

namespace gcelab {

enum class ErrorCode {
  FrameMismatch,
  DegreeUnderflow,
  DegreeUnsupported,
  UnsupportedDimension,
  UnsupportedValence,
  InvariantViolation,
  NoCharacteristicConnection,
  PreconditionViolation,
  NoLeeDirection,
  DecompositionFailure,
  InvalidModification,
  InvalidSasakian,
  InvalidParameter,
  InvalidConformalFactor,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gcelab
