#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "securecam/aes.hpp"
#include "securecam/bytes.hpp"

namespace securecam {

/// Wire tags for the three supported block-cipher modes.
///
/// ECB encrypts equal plaintext blocks to equal ciphertext blocks and leaks
/// image structure. It exists for parity with the original device library
/// and is refused wherever a mode is configured unless the caller opts in.
enum class CipherMode : std::uint8_t {
  ECB = 0x00,
  CBC = 0x01,
  CTR = 0x02,
};

std::string_view to_string(CipherMode mode);
/// Accepts "ecb", "cbc", "ctr" (case-insensitive).
std::optional<CipherMode> parse_mode(std::string_view name);
std::optional<CipherMode> mode_from_tag(std::uint8_t tag);

/// Throws Error(InsecureModeRejected) for ECB unless allow_ecb is set.
void require_mode_allowed(CipherMode mode, bool allow_ecb);

// PKCS#7, always-pad: aligned input gains a full block of 0x10.
Bytes pad_pkcs7(ByteView data);
/// Throws Error(InvalidLength) unless the size is a nonzero multiple of 16,
/// Error(InvalidPadding) if the trailing pad bytes are malformed.
Bytes unpad_pkcs7(ByteView data);

// ECB/CBC take block-aligned buffers (pad first) and throw
// Error(InvalidLength) otherwise.
Bytes ecb_encrypt(const CipherContext& ctx, ByteView buf);
Bytes ecb_decrypt(const CipherContext& ctx, ByteView buf);

// CBC starts chaining from ctx.iv() and leaves the last ciphertext block in
// ctx.iv(), so consecutive calls continue one chain.
Bytes cbc_encrypt(CipherContext& ctx, ByteView buf);
Bytes cbc_decrypt(CipherContext& ctx, ByteView buf);

/// CTR keystream XOR; the same call encrypts and decrypts. ctx.iv() is the
/// full 16-byte counter block, incremented big-endian (wrapping) once per
/// keystream block. After the call it points past the blocks consumed, with
/// a partially used final block counted as consumed.
Bytes ctr_xcrypt(CipherContext& ctx, ByteView buf);

}  // namespace securecam
