#include "securecam/jpeg.hpp"

#include <algorithm>

#include "securecam/splitmix.hpp"

namespace securecam::jpeg {
namespace {

// 8x8 grayscale baseline JFIF, quality 75.
constexpr std::uint8_t kTemplate[] = {
    0xff, 0xd8, 0xff, 0xe0, 0x00, 0x10, 0x4a, 0x46, 0x49, 0x46, 0x00, 0x01, 0x01, 0x00, 0x00, 0x01,
    0x00, 0x01, 0x00, 0x00, 0xff, 0xdb, 0x00, 0x43, 0x00, 0x08, 0x06, 0x06, 0x07, 0x06, 0x05, 0x08,
    0x07, 0x07, 0x07, 0x09, 0x09, 0x08, 0x0a, 0x0c, 0x14, 0x0d, 0x0c, 0x0b, 0x0b, 0x0c, 0x19, 0x12,
    0x13, 0x0f, 0x14, 0x1d, 0x1a, 0x1f, 0x1e, 0x1d, 0x1a, 0x1c, 0x1c, 0x20, 0x24, 0x2e, 0x27, 0x20,
    0x22, 0x2c, 0x23, 0x1c, 0x1c, 0x28, 0x37, 0x29, 0x2c, 0x30, 0x31, 0x34, 0x34, 0x34, 0x1f, 0x27,
    0x39, 0x3d, 0x38, 0x32, 0x3c, 0x2e, 0x33, 0x34, 0x32, 0xff, 0xc0, 0x00, 0x0b, 0x08, 0x00, 0x08,
    0x00, 0x08, 0x01, 0x01, 0x11, 0x00, 0xff, 0xc4, 0x00, 0x1f, 0x00, 0x00, 0x01, 0x05, 0x01, 0x01,
    0x01, 0x01, 0x01, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x01, 0x02, 0x03, 0x04,
    0x05, 0x06, 0x07, 0x08, 0x09, 0x0a, 0x0b, 0xff, 0xc4, 0x00, 0xb5, 0x10, 0x00, 0x02, 0x01, 0x03,
    0x03, 0x02, 0x04, 0x03, 0x05, 0x05, 0x04, 0x04, 0x00, 0x00, 0x01, 0x7d, 0x01, 0x02, 0x03, 0x00,
    0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14, 0x32,
    0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72,
    0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28, 0x29, 0x2a, 0x34, 0x35,
    0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55,
    0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75,
    0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8a, 0x92, 0x93, 0x94,
    0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2,
    0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9,
    0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2, 0xe3, 0xe4, 0xe5, 0xe6,
    0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa, 0xff, 0xda,
    0x00, 0x08, 0x01, 0x01, 0x00, 0x00, 0x3f, 0x00, 0x6f, 0xc1, 0xeb, 0x3f, 0xf8, 0xf7, 0xe3, 0xd2,
    0xbf, 0xff, 0xd9,
};

constexpr std::size_t kComHeader = 4;          // FF FE + 16-bit length
constexpr std::size_t kMaxComPayload = 65533;  // length field counts itself
constexpr std::size_t kMaxComSegment = kComHeader + kMaxComPayload;
constexpr std::size_t kIdBytes = 8;            // "SCAM" + seq

bool is_segment_marker(std::uint8_t m) {
  if (m >= 0xe0 && m <= 0xef) return true;  // APPn
  switch (m) {
    case 0xc0: case 0xc1: case 0xc2: case 0xc3:
    case 0xc5: case 0xc6: case 0xc7:
    case 0xc9: case 0xca: case 0xcb:
    case 0xcd: case 0xce: case 0xcf:  // SOFn
    case 0xc4:                        // DHT
    case 0xdb:                        // DQT
    case 0xdd:                        // DRI
    case 0xfe:                        // COM
      return true;
    default:
      return false;
  }
}

std::size_t read_be16(ByteView d, std::size_t at) {
  return static_cast<std::size_t>(d[at]) << 8 | d[at + 1];
}

// Walks marker segments from just after an SOI. Returns the offset one past
// the EOI on success.
std::optional<std::size_t> walk_from_soi(ByteView d, std::size_t soi) {
  std::size_t pos = soi + 2;
  int segments = 0;
  while (pos + 4 <= d.size()) {
    if (d[pos] != 0xff) return std::nullopt;
    const std::uint8_t marker = d[pos + 1];
    const std::size_t len = read_be16(d, pos + 2);
    if (len < 2) return std::nullopt;
    if (marker == 0xda) {
      if (segments == 0) return std::nullopt;
      const std::size_t scan = pos + 2 + len;
      for (std::size_t i = scan; i + 1 < d.size(); ++i) {
        if (d[i] == 0xff && d[i + 1] == 0xd9) return i + 2;
      }
      return std::nullopt;
    }
    if (!is_segment_marker(marker)) return std::nullopt;
    pos += 2 + len;
    ++segments;
  }
  return std::nullopt;
}

}  // namespace

bool has_magic(ByteView data) {
  return data.size() >= 4 && data[0] == 0xff && data[1] == 0xd8 &&
         data[data.size() - 2] == 0xff && data[data.size() - 1] == 0xd9;
}

ByteView template_image() { return ByteView(kTemplate, sizeof(kTemplate)); }

std::optional<Span> find_embedded(ByteView data, std::size_t min_length) {
  for (std::size_t i = 0; i + 1 < data.size(); ++i) {
    if (data[i] != 0xff || data[i + 1] != 0xd8) continue;
    if (const auto end = walk_from_soi(data, i)) {
      const std::size_t len = *end - i;
      if (len > min_length) return Span{i, len};
    }
  }
  return std::nullopt;
}

std::size_t min_synthetic_size() { return sizeof(kTemplate) + kComHeader + kIdBytes; }

Bytes make_synthetic(std::uint64_t seed, std::uint32_t seq, std::size_t target_bytes) {
  const std::size_t total = std::max(target_bytes, min_synthetic_size());
  std::size_t extra = total - sizeof(kTemplate);

  // Split the inserted bytes into COM segments no larger than the 16-bit
  // length allows; the last one must still hold its own header.
  std::vector<std::size_t> segments;
  while (extra > 0) {
    std::size_t take = std::min(extra, kMaxComSegment);
    if (extra - take > 0 && extra - take < kComHeader) take -= kComHeader;
    segments.push_back(take);
    extra -= take;
  }

  SplitMix64 rng(seed ^ (0x5ca3'0000'0000'0000ULL + seq * 0xd1b54a32d192ed03ULL));
  std::uint64_t word = 0;
  int word_left = 0;

  Bytes out;
  out.reserve(total);
  out.push_back(0xff);
  out.push_back(0xd8);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const std::size_t payload = segments[s] - kComHeader;
    out.push_back(0xff);
    out.push_back(0xfe);
    out.push_back(static_cast<std::uint8_t>((payload + 2) >> 8));
    out.push_back(static_cast<std::uint8_t>((payload + 2) & 0xff));
    std::size_t written = 0;
    if (s == 0) {
      for (char c : {'S', 'C', 'A', 'M'}) out.push_back(static_cast<std::uint8_t>(c));
      for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(seq >> shift));
      }
      written = kIdBytes;
    }
    for (; written < payload; ++written) {
      if (word_left == 0) {
        word = rng.next();
        word_left = 8;
      }
      out.push_back(static_cast<std::uint8_t>(word));
      word >>= 8;
      --word_left;
    }
  }
  out.insert(out.end(), kTemplate + 2, kTemplate + sizeof(kTemplate));
  return out;
}

}  // namespace securecam::jpeg
