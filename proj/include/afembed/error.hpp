#pragma once

#include <stdexcept>
#include <string>

namespace afembed {

// Error taxonomy. Codes map onto the CLI exit classes:
//   2  malformed input / invariant violation
//   3  mathematically negative verdict
//   4  numerical precondition not met (cannot decide at this precision)
enum class ErrorCode {
  ParseError,
  ShapeMismatch,
  InvalidDimension,
  InvalidMatrix,
  InvalidChain,
  InvalidSequence,
  NotAUhfChain,
  NotAMorphism,
  NotHermitian,
  NotUnitary,
  EmptyFamily,
  ScaleLimit,

  NotCp,

  DefectTooLarge,
  SpectrumInGap,
  NotNearContraction,
  InconsistentDimensions,
  NotInvertibleUnitImage,
  NonConvergent,
  NeverAdmissible,
  DegenerateSubspace,
  Internal,
};

const char* error_code_name(ErrorCode c);

// Process exit class for a code (2, 3 or 4; affirmative results exit 0).
int error_exit_class(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace afembed
