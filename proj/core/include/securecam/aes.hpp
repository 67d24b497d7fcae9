#pragma once

#include <cstdint>
#include <vector>

#include "securecam/bytes.hpp"

namespace securecam {

/// AES key schedule plus the running IV / counter block used by the buffer
/// modes in modes.hpp.
///
/// Round keys are expanded once at construction and stored flat
/// (11/13/15 round keys of 16 bytes for 128/192/256-bit keys). The block
/// functions only read the schedule, so one context may be shared between
/// threads for encrypt_block/decrypt_block. Anything that touches iv() needs
/// exclusive access.
///
/// Table-driven implementation without constant-time hardening: lookups are
/// indexed by secret data, so this is not side-channel resistant.
class CipherContext {
 public:
  /// Expands a 16, 24 or 32 byte key. IV starts all-zero.
  /// Throws Error(InvalidKeyLength) for any other length.
  static CipherContext expand_key(ByteView key);

  /// Encrypts one 16-byte block. Throws Error(InvalidBlockLength).
  Block encrypt_block(ByteView block) const;
  /// Inverse of encrypt_block. Throws Error(InvalidBlockLength).
  Block decrypt_block(ByteView block) const;

  // Unchecked in-place variants for the mode loops.
  void encrypt_in_place(std::uint8_t* block) const noexcept;
  void decrypt_in_place(std::uint8_t* block) const noexcept;

  int key_bits() const noexcept { return key_bits_; }
  int rounds() const noexcept { return rounds_; }
  ByteView round_keys() const noexcept { return round_keys_; }

  const Block& iv() const noexcept { return iv_; }
  Block& iv() noexcept { return iv_; }

  /// Replaces the IV / counter block. Throws Error(InvalidLength) unless 16 bytes.
  void set_iv(ByteView iv);

 private:
  CipherContext() = default;

  std::vector<std::uint8_t> round_keys_;
  Block iv_{};
  int key_bits_ = 0;
  int rounds_ = 0;
};

}  // namespace securecam
