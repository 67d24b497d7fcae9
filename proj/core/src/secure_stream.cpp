#include "securecam/secure_stream.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "securecam/error.hpp"
#include "securecam/jpeg.hpp"

namespace securecam {
namespace {

void put_be(Bytes& out, std::uint64_t value, int width) {
  for (int shift = 8 * (width - 1); shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

std::uint64_t get_be(ByteView in, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = v << 8 | in[at + static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

std::uint64_t expected_ciphertext_len(CipherMode mode, std::uint64_t plaintext_len) {
  if (mode == CipherMode::CTR) return plaintext_len;
  return (plaintext_len / kBlockSize + 1) * kBlockSize;
}

Block random_iv() {
  thread_local std::random_device rd;
  Block iv;
  for (std::size_t i = 0; i < iv.size(); i += 4) {
    const std::uint32_t word = rd();
    for (std::size_t j = 0; j < 4; ++j) iv[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  return iv;
}

EncryptedFrame seal_frame(const Frame& frame, const KeyConfig& cfg, std::uint32_t seq,
                          const IvSource& iv_source) {
  // Leave room for the pad block so ciphertext_len also fits 32 bits.
  if (frame.jpeg.size() > std::numeric_limits<std::uint32_t>::max() - kBlockSize) {
    throw Error(ErrorCode::InvalidLength, "frame too large for the wire format");
  }
  auto ctx = CipherContext::expand_key(cfg.key);

  EncryptedFrame enc;
  enc.mode = cfg.mode;
  enc.key_id = cfg.key_id;
  enc.seq = seq;
  enc.timestamp_ms = frame.timestamp_ms;
  enc.plaintext_len = static_cast<std::uint32_t>(frame.jpeg.size());

  switch (cfg.mode) {
    case CipherMode::ECB:
      enc.ciphertext = ecb_encrypt(ctx, pad_pkcs7(frame.jpeg));
      break;
    case CipherMode::CBC:
      enc.iv = iv_source();
      ctx.set_iv(enc.iv);
      enc.ciphertext = cbc_encrypt(ctx, pad_pkcs7(frame.jpeg));
      break;
    case CipherMode::CTR:
      enc.iv = iv_source();
      ctx.set_iv(enc.iv);
      enc.ciphertext = ctr_xcrypt(ctx, frame.jpeg);
      break;
  }
  return enc;
}

Bytes open_frame(const EncryptedFrame& enc, const KeyConfig& cfg) {
  if (enc.key_id != cfg.key_id) {
    throw Error(ErrorCode::KeyMismatch, "record key_id " + std::to_string(enc.key_id) +
                                            ", configured " + std::to_string(cfg.key_id));
  }
  if (enc.ciphertext.size() != expected_ciphertext_len(enc.mode, enc.plaintext_len)) {
    throw Error(ErrorCode::LengthMismatch, "ciphertext length disagrees with plaintext_len");
  }
  auto ctx = CipherContext::expand_key(cfg.key);

  Bytes plain;
  switch (enc.mode) {
    case CipherMode::ECB:
      plain = unpad_pkcs7(ecb_decrypt(ctx, enc.ciphertext));
      break;
    case CipherMode::CBC:
      ctx.set_iv(enc.iv);
      plain = unpad_pkcs7(cbc_decrypt(ctx, enc.ciphertext));
      break;
    case CipherMode::CTR:
      ctx.set_iv(enc.iv);
      plain = ctr_xcrypt(ctx, enc.ciphertext);
      break;
  }
  if (plain.size() != enc.plaintext_len) {
    throw Error(ErrorCode::LengthMismatch, "unpadded length " + std::to_string(plain.size()) +
                                               " != plaintext_len " +
                                               std::to_string(enc.plaintext_len));
  }
  if (!jpeg::has_magic(plain)) {
    throw Error(ErrorCode::CorruptImage, "decrypted data is not SOI..EOI framed");
  }
  return plain;
}

Bytes encode_wire(const EncryptedFrame& enc) {
  Bytes out;
  out.reserve(kWireHeaderSize + enc.ciphertext.size());
  out.insert(out.end(), std::begin(kWireMagic), std::end(kWireMagic));
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(enc.mode));
  out.push_back(enc.key_id);
  out.push_back(0x00);
  put_be(out, enc.seq, 4);
  put_be(out, enc.timestamp_ms, 8);
  out.insert(out.end(), enc.iv.begin(), enc.iv.end());
  put_be(out, enc.plaintext_len, 4);
  put_be(out, enc.ciphertext.size(), 4);
  out.insert(out.end(), enc.ciphertext.begin(), enc.ciphertext.end());
  return out;
}

EncryptedFrame decode_wire(ByteView bytes) {
  if (bytes.size() < kWireHeaderSize) {
    throw Error(ErrorCode::TruncatedRecord, "record shorter than the 44-byte header");
  }
  if (!std::equal(std::begin(kWireMagic), std::end(kWireMagic), bytes.begin())) {
    throw Error(ErrorCode::BadMagic);
  }
  if (bytes[4] != kWireVersion || bytes[7] != 0x00) {
    throw Error(ErrorCode::UnsupportedVersion, "version " + std::to_string(bytes[4]) +
                                                   ", reserved " + std::to_string(bytes[7]));
  }
  const auto mode = mode_from_tag(bytes[5]);
  if (!mode) throw Error(ErrorCode::UnknownMode, "tag " + std::to_string(bytes[5]));

  const auto plaintext_len = static_cast<std::uint32_t>(get_be(bytes, 36, 4));
  const auto ciphertext_len = get_be(bytes, 40, 4);
  const std::size_t available = bytes.size() - kWireHeaderSize;
  if (ciphertext_len > available) {
    throw Error(ErrorCode::TruncatedRecord, "declared " + std::to_string(ciphertext_len) +
                                                " ciphertext bytes, " +
                                                std::to_string(available) + " present");
  }
  if (ciphertext_len != available) {
    throw Error(ErrorCode::LengthMismatch, "trailing bytes after ciphertext");
  }
  if (ciphertext_len != expected_ciphertext_len(*mode, plaintext_len)) {
    throw Error(ErrorCode::LengthMismatch, "ciphertext_len inconsistent with mode and plaintext_len");
  }

  EncryptedFrame enc;
  enc.mode = *mode;
  enc.key_id = bytes[6];
  enc.seq = static_cast<std::uint32_t>(get_be(bytes, 8, 4));
  enc.timestamp_ms = get_be(bytes, 12, 8);
  std::copy_n(bytes.begin() + 20, kBlockSize, enc.iv.begin());
  enc.plaintext_len = plaintext_len;
  enc.ciphertext.assign(bytes.begin() + kWireHeaderSize, bytes.end());
  return enc;
}

}  // namespace securecam
