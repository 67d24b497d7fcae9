#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace securecam {

enum class ErrorCode {
  InvalidKeyLength,
  InvalidBlockLength,
  InvalidLength,
  InvalidPadding,
  InvalidHex,
  KeyMismatch,
  CorruptImage,
  BadMagic,
  UnsupportedVersion,
  UnknownMode,
  TruncatedRecord,
  LengthMismatch,
  SourceExhausted,
  UnknownVar,
  OutOfRange,
  InsecureModeRejected,
  BadConfig,
  IoFailure,
  ConnectFailed,
  MalformedStream,
  FrameRejected,
};

std::string_view to_string(ErrorCode code);

/// The single exception type thrown by the library. Callers that need to
/// classify failures (the relay counts rejects by cause) switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  explicit Error(ErrorCode code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace securecam
