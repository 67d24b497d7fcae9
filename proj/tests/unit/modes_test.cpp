#include <gtest/gtest.h>

#include <random>
#include <set>

#include "expect_error.hpp"
#include "openssl_oracle.hpp"
#include "securecam/error.hpp"
#include "securecam/modes.hpp"
#include "test_util.hpp"

namespace securecam {
namespace {

using testing::expect_error;
using testing::openssl_crypt;

// NIST SP 800-38A F.1.1, F.2.1, F.5.1 (AES-128).
const char* const kKey = "2b7e151628aed2a6abf7158809cf4f3c";
const char* const kPlain =
    "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710";
const char* const kEcbCipher =
    "3ad77bb40d7a3660a89ecaf32466ef97f5d3d58503b9699de785895a96fdbaaf"
    "43b1cd7f598ece23881b00e3ed0306887b0c785e27e8ad3f8223207104725dd4";
const char* const kCbcIv = "000102030405060708090a0b0c0d0e0f";
const char* const kCbcCipher =
    "7649abac8119b246cee98e9b12e9197d5086cb9b507219ee95db113a917678b2"
    "73bed6b8e3c1743b7116e69e222295163ff1caa1681fac09120eca307586e1a7";
const char* const kCtrCounter = "f0f1f2f3f4f5f6f7f8f9fafbfcfdfeff";
const char* const kCtrCipher =
    "874d6191b620e3261bef6864990db6ce9806f66b7970fdff8617187bb9fffdff"
    "5ae4df3edbd5d35e5b4f09020db03eab1e031dda2fbe03d1792170a0f3009cee";

TEST(Pkcs7, PadExamples) {
  EXPECT_EQ(pad_pkcs7({}), Bytes(16, 0x10));
  Bytes fifteen(15, 0xaa);
  Bytes expect = fifteen;
  expect.push_back(0x01);
  EXPECT_EQ(pad_pkcs7(fifteen), expect);
  Bytes sixteen(16, 0xbb);
  expect = sixteen;
  expect.insert(expect.end(), 16, 0x10);
  EXPECT_EQ(pad_pkcs7(sixteen), expect);
}

TEST(Pkcs7, RoundTripProperty) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Bytes data = testing::random_bytes(rng, rng() % 4097);
    const Bytes padded = pad_pkcs7(data);
    ASSERT_EQ(padded.size() % 16, 0u);
    ASSERT_GT(padded.size(), data.size());
    ASSERT_LE(padded.size(), data.size() + 16);
    ASSERT_EQ(unpad_pkcs7(padded), data);
  }
}

TEST(Pkcs7, UnpadErrors) {
  Bytes zero_pad(16, 0x41);
  zero_pad.back() = 0x00;
  expect_error(ErrorCode::InvalidPadding, [&] { unpad_pkcs7(zero_pad); });
  Bytes too_big(16, 0x11);
  expect_error(ErrorCode::InvalidPadding, [&] { unpad_pkcs7(too_big); });
  Bytes disagree(16, 0x41);
  disagree[15] = 0x03;
  disagree[14] = 0x03;
  disagree[13] = 0x02;
  expect_error(ErrorCode::InvalidPadding, [&] { unpad_pkcs7(disagree); });
  expect_error(ErrorCode::InvalidLength, [&] { unpad_pkcs7(Bytes(17, 0x01)); });
  expect_error(ErrorCode::InvalidLength, [&] { unpad_pkcs7(Bytes{}); });
}

TEST(Ecb, Sp80038aVectors) {
  const auto ctx = CipherContext::expand_key(from_hex(kKey));
  EXPECT_EQ(to_hex(ecb_encrypt(ctx, from_hex(kPlain))), kEcbCipher);
  EXPECT_EQ(to_hex(ecb_decrypt(ctx, from_hex(kEcbCipher))), kPlain);
}

TEST(Ecb, EqualBlocksLeak) {
  const auto ctx = CipherContext::expand_key(Bytes(16, 0x42));
  Bytes two(32, 0x5a);
  const Bytes out = ecb_encrypt(ctx, two);
  EXPECT_TRUE(std::equal(out.begin(), out.begin() + 16, out.begin() + 16));
  EXPECT_EQ(ecb_decrypt(ctx, out), two);
}

TEST(Ecb, RejectsUnalignedLength) {
  const auto ctx = CipherContext::expand_key(Bytes(16, 0));
  expect_error(ErrorCode::InvalidLength, [&] { ecb_encrypt(ctx, Bytes(20, 0)); });
  expect_error(ErrorCode::InvalidLength, [&] { ecb_decrypt(ctx, Bytes(1, 0)); });
}

TEST(Cbc, Sp80038aVectors) {
  auto ctx = CipherContext::expand_key(from_hex(kKey));
  ctx.set_iv(from_hex(kCbcIv));
  EXPECT_EQ(to_hex(cbc_encrypt(ctx, from_hex(kPlain))), kCbcCipher);
  // Chaining continues from the last ciphertext block.
  EXPECT_EQ(to_hex(ctx.iv()), "3ff1caa1681fac09120eca307586e1a7");

  ctx.set_iv(from_hex(kCbcIv));
  EXPECT_EQ(to_hex(cbc_decrypt(ctx, from_hex(kCbcCipher))), kPlain);
}

TEST(Cbc, SplitCallsMatchOneCall) {
  auto whole = CipherContext::expand_key(from_hex(kKey));
  whole.set_iv(from_hex(kCbcIv));
  const Bytes plain = from_hex(kPlain);
  const Bytes expected = cbc_encrypt(whole, plain);

  auto split = CipherContext::expand_key(from_hex(kKey));
  split.set_iv(from_hex(kCbcIv));
  Bytes first = cbc_encrypt(split, ByteView(plain).first(32));
  const Bytes second = cbc_encrypt(split, ByteView(plain).subspan(32));
  first.insert(first.end(), second.begin(), second.end());
  EXPECT_EQ(first, expected);
}

TEST(Cbc, IvDependence) {
  const Bytes plain = from_hex(kPlain);
  auto a = CipherContext::expand_key(from_hex(kKey));
  auto b = CipherContext::expand_key(from_hex(kKey));
  b.set_iv(from_hex(kCbcIv));
  const Bytes ca = cbc_encrypt(a, plain);
  const Bytes cb = cbc_encrypt(b, plain);
  EXPECT_FALSE(std::equal(ca.begin(), ca.begin() + 16, cb.begin()));
}

TEST(Cbc, ZeroIvMatchesFreshContext) {
  const Bytes plain = from_hex(kPlain);
  auto fresh = CipherContext::expand_key(from_hex(kKey));
  auto reset = CipherContext::expand_key(from_hex(kKey));
  reset.set_iv(from_hex(kCbcIv));
  reset.set_iv(Bytes(16, 0));
  EXPECT_EQ(cbc_encrypt(fresh, plain), cbc_encrypt(reset, plain));
}

TEST(Cbc, SingleBlockRoundTripZeroIv) {
  auto enc = CipherContext::expand_key(from_hex(kKey));
  auto dec = CipherContext::expand_key(from_hex(kKey));
  const Bytes block = from_hex("6bc1bee22e409f96e93d7e117393172a");
  EXPECT_EQ(cbc_decrypt(dec, cbc_encrypt(enc, block)), block);
}

TEST(Cbc, RejectsUnalignedLength) {
  auto ctx = CipherContext::expand_key(Bytes(16, 0));
  expect_error(ErrorCode::InvalidLength, [&] { cbc_decrypt(ctx, Bytes(31, 0)); });
  expect_error(ErrorCode::InvalidLength, [&] { cbc_encrypt(ctx, Bytes(5, 0)); });
}

TEST(Ctr, Sp80038aVectors) {
  auto ctx = CipherContext::expand_key(from_hex(kKey));
  ctx.set_iv(from_hex(kCtrCounter));
  EXPECT_EQ(to_hex(ctr_xcrypt(ctx, from_hex(kPlain))), kCtrCipher);
  EXPECT_EQ(to_hex(ctx.iv()), "f0f1f2f3f4f5f6f7f8f9fafbfcfdff03");
}

TEST(Ctr, InvolutionAndLength) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Bytes key = testing::random_key(rng, 16 + 8 * (rng() % 3));
    const Bytes iv = testing::random_bytes(rng, 16);
    const Bytes buf = testing::random_bytes(rng, rng() % 3000);
    auto a = CipherContext::expand_key(key);
    a.set_iv(iv);
    const Bytes once = ctr_xcrypt(a, buf);
    ASSERT_EQ(once.size(), buf.size());
    auto b = CipherContext::expand_key(key);
    b.set_iv(iv);
    ASSERT_EQ(ctr_xcrypt(b, once), buf);
  }
}

TEST(Ctr, EmptyBuffer) {
  auto ctx = CipherContext::expand_key(Bytes(16, 1));
  EXPECT_TRUE(ctr_xcrypt(ctx, {}).empty());
  EXPECT_EQ(ctx.iv(), Block{});
}

TEST(Ctr, CounterWrapsAcrossAllSixteenBytes) {
  const Bytes key(16, 0x33);
  const Bytes iv(16, 0xff);
  auto ctx = CipherContext::expand_key(key);
  ctx.set_iv(iv);
  const Bytes zeros(32, 0);
  const Bytes ks = ctr_xcrypt(ctx, zeros);
  EXPECT_EQ(to_hex(ks), to_hex(openssl_crypt(CipherMode::CTR, key, iv, zeros, true)));
  EXPECT_EQ(ctx.iv()[15], 0x01);
}

TEST(SetIv, RejectsWrongLength) {
  auto ctx = CipherContext::expand_key(Bytes(16, 0));
  expect_error(ErrorCode::InvalidLength, [&] { ctx.set_iv(Bytes(8, 0)); });
}

// Cross-check every mode and key size against OpenSSL on random buffers.
TEST(Modes, MatchOpenSsl) {
  std::mt19937_64 rng(99);
  for (const CipherMode mode : {CipherMode::ECB, CipherMode::CBC, CipherMode::CTR}) {
    for (std::size_t key_len : {16u, 24u, 32u}) {
      for (int i = 0; i < 40; ++i) {
        const Bytes key = testing::random_key(rng, key_len);
        const Bytes iv = testing::random_bytes(rng, 16);
        std::size_t len = rng() % 2048;
        if (mode != CipherMode::CTR) len -= len % 16;
        const Bytes buf = testing::random_bytes(rng, len);
        auto ctx = CipherContext::expand_key(key);
        ctx.set_iv(iv);
        Bytes ours;
        switch (mode) {
          case CipherMode::ECB: ours = ecb_encrypt(ctx, buf); break;
          case CipherMode::CBC: ours = cbc_encrypt(ctx, buf); break;
          case CipherMode::CTR: ours = ctr_xcrypt(ctx, buf); break;
        }
        ASSERT_EQ(to_hex(ours), to_hex(openssl_crypt(mode, key, iv, buf, true)))
            << to_string(mode) << " key " << key_len << " len " << len;
      }
    }
  }
}

TEST(Modes, RandomIvHidesRepeatedBlocks) {
  std::mt19937_64 rng(17);
  const Bytes key = testing::random_key(rng);
  for (int trial = 0; trial < 100; ++trial) {
    const Bytes buf = testing::random_bytes(rng, 4096);
    for (const CipherMode mode : {CipherMode::CBC, CipherMode::CTR}) {
      auto ctx = CipherContext::expand_key(key);
      ctx.set_iv(testing::random_bytes(rng, 16));
      const Bytes out = mode == CipherMode::CBC ? cbc_encrypt(ctx, buf) : ctr_xcrypt(ctx, buf);
      std::set<Bytes> blocks;
      for (std::size_t off = 0; off < out.size(); off += 16) {
        blocks.emplace(out.begin() + static_cast<std::ptrdiff_t>(off),
                       out.begin() + static_cast<std::ptrdiff_t>(off + 16));
      }
      ASSERT_EQ(blocks.size(), out.size() / 16);
    }
  }
}

TEST(ModeNames, ParseAndOptIn) {
  EXPECT_EQ(parse_mode("CTR"), CipherMode::CTR);
  EXPECT_EQ(parse_mode("cbc"), CipherMode::CBC);
  EXPECT_EQ(parse_mode("ecb"), CipherMode::ECB);
  EXPECT_FALSE(parse_mode("gcm"));
  EXPECT_FALSE(mode_from_tag(0x03));
  expect_error(ErrorCode::InsecureModeRejected, [] { require_mode_allowed(CipherMode::ECB, false); });
  EXPECT_NO_THROW(require_mode_allowed(CipherMode::ECB, true));
  EXPECT_NO_THROW(require_mode_allowed(CipherMode::CBC, false));
}

}  // namespace
}  // namespace securecam
