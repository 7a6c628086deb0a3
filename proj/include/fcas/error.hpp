#pragma once

#include <stdexcept>
#include <string>

namespace fcas {

enum class ErrorCode {
  Io,                   // missing or unreadable file
  Schema,               // malformed header or unparseable field
  Ordering,             // non-monotonic or duplicate timestamps
  DataQuality,          // too many missing rows in a day
  Validation,           // record-level invariant violated
  Parameter,            // invalid argument to an operation
  InsufficientData,     // not enough samples to estimate
  GridIncompatibility,  // distributions on different grid steps
  Configuration,        // invalid or incomplete run configuration
  EmptyInput,           // no overlapping span between series
  DataInconsistency,    // derived statistics contradict each other
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fcas
