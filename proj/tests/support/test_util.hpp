#pragma once

#include <cstdint>
#include <random>

#include "securecam/bytes.hpp"
#include "securecam/jpeg.hpp"

namespace securecam::testing {

inline Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

/// SOI + random body + EOI, exactly n >= 4 bytes.
inline Bytes random_jpeg_shaped(std::mt19937_64& rng, std::size_t n) {
  Bytes out = random_bytes(rng, n);
  out[0] = 0xff;
  out[1] = 0xd8;
  out[n - 2] = 0xff;
  out[n - 1] = 0xd9;
  return out;
}

inline Bytes random_key(std::mt19937_64& rng, std::size_t len = 16) { return random_bytes(rng, len); }

}  // namespace securecam::testing
