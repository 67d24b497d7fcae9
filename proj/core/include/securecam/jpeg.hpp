#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "securecam/bytes.hpp"

namespace securecam::jpeg {

/// SOI prefix (FF D8) and EOI suffix (FF D9). This is the only integrity
/// check applied to opened frames.
bool has_magic(ByteView data);

/// Embedded 8x8 baseline JPEG used by the generator frame source.
ByteView template_image();

struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// Looks for a structurally plausible JPEG inside arbitrary bytes: an SOI
/// followed by well-formed marker segments up to SOS, then an EOI. Returns
/// the first such span longer than min_length. Random ciphertext almost
/// never produces the segment chain, unlike a bare SOI/EOI byte search.
std::optional<Span> find_embedded(ByteView data, std::size_t min_length);

/// Builds a valid JPEG of exactly target_bytes (or the minimum possible
/// size if target_bytes is smaller) by inserting COM segments after SOI.
/// The first COM carries "SCAM" and the big-endian seq; the rest is
/// splitmix64 filler seeded from (seed, seq).
Bytes make_synthetic(std::uint64_t seed, std::uint32_t seq, std::size_t target_bytes);

/// Smallest size make_synthetic can produce.
std::size_t min_synthetic_size();

}  // namespace securecam::jpeg
