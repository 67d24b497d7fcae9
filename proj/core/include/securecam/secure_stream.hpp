#pragma once

#include <cstdint>
#include <functional>

#include "securecam/bytes.hpp"
#include "securecam/frame_source.hpp"
#include "securecam/modes.hpp"

namespace securecam {

/// A pre-shared key and the mode it is used with. Key distribution is out
/// of band; see key_config.hpp for the file format.
struct KeyConfig {
  std::uint8_t key_id = 0;
  Bytes key;
  CipherMode mode = CipherMode::CTR;
};

/// A sealed frame. There is no MAC: the only integrity signals on open are
/// PKCS#7 padding (ECB/CBC), the length fields and the JPEG SOI/EOI check.
/// A bit flip in the middle of a CTR ciphertext goes undetected.
struct EncryptedFrame {
  CipherMode mode = CipherMode::CTR;
  std::uint8_t key_id = 0;
  std::uint32_t seq = 0;
  std::uint64_t timestamp_ms = 0;
  Block iv{};
  std::uint32_t plaintext_len = 0;
  Bytes ciphertext;

  bool operator==(const EncryptedFrame&) const = default;
};

// Wire record, big-endian:
//   0..3   magic "SFRM"
//   4      version (0x01)
//   5      mode tag
//   6      key_id
//   7      reserved, 0x00
//   8..11  seq
//   12..19 timestamp_ms
//   20..35 iv
//   36..39 plaintext_len
//   40..43 ciphertext_len
//   44..   ciphertext
inline constexpr std::size_t kWireHeaderSize = 44;
inline constexpr std::uint8_t kWireMagic[4] = {0x53, 0x46, 0x52, 0x4d};
inline constexpr std::uint8_t kWireVersion = 0x01;

/// Ciphertext length for a plaintext of `plaintext_len` bytes under `mode`:
/// identical for CTR, next multiple of 16 above it (always-pad) otherwise.
std::uint64_t expected_ciphertext_len(CipherMode mode, std::uint64_t plaintext_len);

using IvSource = std::function<Block()>;

/// 16 bytes from std::random_device.
Block random_iv();

/// Encrypts frame.jpeg under cfg. CBC/CTR draw a fresh IV from iv_source;
/// ECB records carry an all-zero IV. Throws Error(InvalidLength) if the
/// frame does not fit the 32-bit length field.
EncryptedFrame seal_frame(const Frame& frame, const KeyConfig& cfg, std::uint32_t seq,
                          const IvSource& iv_source = random_iv);

/// Decrypts and validates. Throws Error(KeyMismatch) when key ids differ,
/// Error(LengthMismatch) / Error(InvalidLength) for inconsistent lengths,
/// Error(InvalidPadding) for bad ECB/CBC padding and Error(CorruptImage)
/// when the result is not SOI...EOI framed.
Bytes open_frame(const EncryptedFrame& enc, const KeyConfig& cfg);

Bytes encode_wire(const EncryptedFrame& enc);

/// Parses one complete record. Header fields are validated before any
/// payload allocation. Throws Error(BadMagic), Error(UnsupportedVersion),
/// Error(UnknownMode), Error(TruncatedRecord) or Error(LengthMismatch).
EncryptedFrame decode_wire(ByteView bytes);

}  // namespace securecam
