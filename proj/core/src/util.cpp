#include <string>

#include "securecam/bytes.hpp"
#include "securecam/error.hpp"

namespace securecam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidKeyLength: return "InvalidKeyLength";
    case ErrorCode::InvalidBlockLength: return "InvalidBlockLength";
    case ErrorCode::InvalidLength: return "InvalidLength";
    case ErrorCode::InvalidPadding: return "InvalidPadding";
    case ErrorCode::InvalidHex: return "InvalidHex";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnknownMode: return "UnknownMode";
    case ErrorCode::TruncatedRecord: return "TruncatedRecord";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SourceExhausted: return "SourceExhausted";
    case ErrorCode::UnknownVar: return "UnknownVar";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InsecureModeRejected: return "InsecureModeRejected";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConnectFailed: return "ConnectFailed";
    case ErrorCode::MalformedStream: return "MalformedStream";
    case ErrorCode::FrameRejected: return "FrameRejected";
  }
  return "Unknown";
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::InvalidHex, "odd number of hex digits");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_value(hex[i]);
    const int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::InvalidHex, "non-hex character");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace securecam
