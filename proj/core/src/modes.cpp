#include "securecam/modes.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "securecam/error.hpp"

namespace securecam {
namespace {

void require_aligned(ByteView buf, std::string_view op) {
  if (buf.size() % kBlockSize != 0) {
    throw Error(ErrorCode::InvalidLength, std::string(op) + ": length " +
                                              std::to_string(buf.size()) +
                                              " is not a multiple of 16");
  }
}

void increment_counter(Block& counter) {
  for (int i = kBlockSize - 1; i >= 0; --i) {
    if (++counter[i] != 0) break;
  }
}

}  // namespace

std::string_view to_string(CipherMode mode) {
  switch (mode) {
    case CipherMode::ECB: return "ecb";
    case CipherMode::CBC: return "cbc";
    case CipherMode::CTR: return "ctr";
  }
  return "unknown";
}

std::optional<CipherMode> parse_mode(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ecb") return CipherMode::ECB;
  if (lower == "cbc") return CipherMode::CBC;
  if (lower == "ctr") return CipherMode::CTR;
  return std::nullopt;
}

std::optional<CipherMode> mode_from_tag(std::uint8_t tag) {
  switch (tag) {
    case 0x00: return CipherMode::ECB;
    case 0x01: return CipherMode::CBC;
    case 0x02: return CipherMode::CTR;
    default: return std::nullopt;
  }
}

void require_mode_allowed(CipherMode mode, bool allow_ecb) {
  if (mode == CipherMode::ECB && !allow_ecb) {
    throw Error(ErrorCode::InsecureModeRejected,
                "ECB leaks plaintext block equality; pass the explicit ECB opt-in to use it");
  }
}

Bytes pad_pkcs7(ByteView data) {
  const std::size_t pad = kBlockSize - data.size() % kBlockSize;
  Bytes out;
  out.reserve(data.size() + pad);
  out.assign(data.begin(), data.end());
  out.insert(out.end(), pad, static_cast<std::uint8_t>(pad));
  return out;
}

Bytes unpad_pkcs7(ByteView data) {
  if (data.empty() || data.size() % kBlockSize != 0) {
    throw Error(ErrorCode::InvalidLength, "padded length " + std::to_string(data.size()) +
                                              " is not a nonzero multiple of 16");
  }
  const std::uint8_t pad = data.back();
  if (pad == 0 || pad > kBlockSize) {
    throw Error(ErrorCode::InvalidPadding, "pad byte out of range");
  }
  const auto tail = data.last(pad);
  if (!std::all_of(tail.begin(), tail.end(), [pad](std::uint8_t b) { return b == pad; })) {
    throw Error(ErrorCode::InvalidPadding, "pad bytes disagree");
  }
  return Bytes(data.begin(), data.end() - pad);
}

Bytes ecb_encrypt(const CipherContext& ctx, ByteView buf) {
  require_aligned(buf, "ecb_encrypt");
  Bytes out(buf.begin(), buf.end());
  for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
    ctx.encrypt_in_place(out.data() + off);
  }
  return out;
}

Bytes ecb_decrypt(const CipherContext& ctx, ByteView buf) {
  require_aligned(buf, "ecb_decrypt");
  Bytes out(buf.begin(), buf.end());
  for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
    ctx.decrypt_in_place(out.data() + off);
  }
  return out;
}

Bytes cbc_encrypt(CipherContext& ctx, ByteView buf) {
  require_aligned(buf, "cbc_encrypt");
  Bytes out(buf.begin(), buf.end());
  Block& chain = ctx.iv();
  for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
    std::uint8_t* block = out.data() + off;
    for (std::size_t i = 0; i < kBlockSize; ++i) block[i] ^= chain[i];
    ctx.encrypt_in_place(block);
    std::copy(block, block + kBlockSize, chain.begin());
  }
  return out;
}

Bytes cbc_decrypt(CipherContext& ctx, ByteView buf) {
  require_aligned(buf, "cbc_decrypt");
  Bytes out(buf.begin(), buf.end());
  Block& chain = ctx.iv();
  Block next;
  for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
    std::uint8_t* block = out.data() + off;
    std::copy(block, block + kBlockSize, next.begin());
    ctx.decrypt_in_place(block);
    for (std::size_t i = 0; i < kBlockSize; ++i) block[i] ^= chain[i];
    chain = next;
  }
  return out;
}

Bytes ctr_xcrypt(CipherContext& ctx, ByteView buf) {
  Bytes out(buf.begin(), buf.end());
  Block& counter = ctx.iv();
  Block keystream;
  for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
    keystream = counter;
    ctx.encrypt_in_place(keystream.data());
    increment_counter(counter);
    const std::size_t n = std::min(kBlockSize, out.size() - off);
    for (std::size_t i = 0; i < n; ++i) out[off + i] ^= keystream[i];
  }
  return out;
}

}  // namespace securecam
