#include <gtest/gtest.h>

#include <atomic>
#include <bit>
#include <random>
#include <thread>

#include "expect_error.hpp"
#include "openssl_oracle.hpp"
#include "securecam/aes.hpp"
#include "securecam/error.hpp"
#include "test_util.hpp"

namespace securecam {
namespace {

using testing::expect_error;
using testing::openssl_crypt;

// Key schedules below were produced by a separate Python implementation of
// the key expansion and cross-checked against the published FIPS-197
// Appendix A expansions.
TEST(KeyExpansion, Fips197AppendixA1) {
  const auto ctx = CipherContext::expand_key(from_hex("2b7e151628aed2a6abf7158809cf4f3c"));
  EXPECT_EQ(to_hex(ctx.round_keys()),
            "2b7e151628aed2a6abf7158809cf4f3ca0fafe1788542cb123a339392a6c7605f2c295f27a96b943"
            "5935807a7359f67f3d80477d4716fe3e1e237e446d7a883bef44a541a8525b7fb671253bdb0bad00"
            "d4d1c6f87c839d87caf2b8bc11f915bc6d88a37a110b3efddbf98641ca0093fd4e54f70e5f5fc9f3"
            "84a64fb24ea6dc4fead27321b58dbad2312bf5607f8d292fac7766f319fadc2128d12941575c006e"
            "d014f9a8c9ee2589e13f0cc8b6630ca6");
}

TEST(KeyExpansion, SequentialKey128) {
  const auto ctx = CipherContext::expand_key(from_hex("000102030405060708090a0b0c0d0e0f"));
  EXPECT_EQ(to_hex(ctx.round_keys()),
            "000102030405060708090a0b0c0d0e0fd6aa74fdd2af72fadaa678f1d6ab76feb692cf0b643dbdf1"
            "be9bc5006830b3feb6ff744ed2c2c9bf6c590cbf0469bf4147f7f7bc95353e03f96c32bcfd058dfd"
            "3caaa3e8a99f9deb50f3af57adf622aa5e390f7df7a69296a7553dc10aa31f6b14f9701ae35fe28c"
            "440adf4d4ea9c02647438735a41c65b9e016baf4aebf7ad2549932d1f08557681093ed9cbe2c974e"
            "13111d7fe3944a17f307a78b4d2b30c5");
}

TEST(KeyExpansion, Fips197AppendixA2AndA3LastRoundKey) {
  const auto k192 =
      CipherContext::expand_key(from_hex("8e73b0f7da0e6452c810f32b809079e562f8ead2522c6b7b"));
  ASSERT_EQ(k192.round_keys().size(), 208u);
  EXPECT_EQ(to_hex(k192.round_keys().last(16)), "e98ba06f448c773c8ecc720401002202");

  const auto k256 = CipherContext::expand_key(
      from_hex("603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4"));
  ASSERT_EQ(k256.round_keys().size(), 240u);
  EXPECT_EQ(to_hex(k256.round_keys().last(16)), "fe4890d1e6188d0b046df344706c631e");
}

TEST(KeyExpansion, ScheduleSizeAndKeyPrefix) {
  std::mt19937_64 rng(7);
  for (const auto [len, rounds] : {std::pair{16u, 10}, {24u, 12}, {32u, 14}}) {
    for (int i = 0; i < 50; ++i) {
      const Bytes key = testing::random_key(rng, len);
      const auto ctx = CipherContext::expand_key(key);
      EXPECT_EQ(ctx.rounds(), rounds);
      EXPECT_EQ(ctx.key_bits(), static_cast<int>(len * 8));
      EXPECT_EQ(ctx.round_keys().size(), 16u * static_cast<std::size_t>(rounds + 1));
      EXPECT_TRUE(std::equal(key.begin(), key.end(), ctx.round_keys().begin()));
      EXPECT_EQ(ctx.iv(), Block{});
    }
  }
}

TEST(KeyExpansion, RejectsOtherLengths) {
  for (std::size_t len : {0u, 1u, 15u, 17u, 20u, 31u, 33u, 64u}) {
    expect_error(ErrorCode::InvalidKeyLength, [&] { CipherContext::expand_key(Bytes(len, 0x11)); });
  }
}

TEST(BlockCipher, Fips197AppendixC) {
  const Bytes plain = from_hex("00112233445566778899aabbccddeeff");
  struct Vector {
    const char* key;
    const char* cipher;
  };
  for (const auto& v : {
           Vector{"000102030405060708090a0b0c0d0e0f", "69c4e0d86a7b0430d8cdb78070b4c55a"},
           Vector{"000102030405060708090a0b0c0d0e0f1011121314151617",
                  "dda97ca4864cdfe06eaf70a0ec0d7191"},
           Vector{"000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
                  "8ea2b7ca516745bfeafc49904b496089"},
       }) {
    const auto ctx = CipherContext::expand_key(from_hex(v.key));
    EXPECT_EQ(to_hex(ctx.encrypt_block(plain)), v.cipher);
    EXPECT_EQ(to_hex(ctx.decrypt_block(from_hex(v.cipher))), to_hex(plain));
  }
}

TEST(BlockCipher, MatchesOpenSslOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (std::size_t len : {16u, 24u, 32u}) {
    for (int i = 0; i < 200; ++i) {
      const Bytes key = testing::random_key(rng, len);
      const Bytes block = testing::random_bytes(rng, 16);
      const auto ctx = CipherContext::expand_key(key);
      const Block ours = ctx.encrypt_block(block);
      const Bytes ref = openssl_crypt(CipherMode::ECB, key, {}, block, true);
      ASSERT_EQ(to_hex(ours), to_hex(ref));
    }
  }
}

TEST(BlockCipher, DecryptInvertsEncrypt) {
  std::mt19937_64 rng(3);
  for (std::size_t len : {16u, 24u, 32u}) {
    const auto ctx = CipherContext::expand_key(testing::random_key(rng, len));
    for (int i = 0; i < 1000; ++i) {
      const Bytes b = testing::random_bytes(rng, 16);
      const Block enc = ctx.encrypt_block(b);
      const Block back = ctx.decrypt_block(enc);
      ASSERT_EQ(Bytes(back.begin(), back.end()), b);
      const Block dec = ctx.decrypt_block(b);
      const Block forward = ctx.encrypt_block(dec);
      ASSERT_EQ(Bytes(forward.begin(), forward.end()), b);
    }
  }
}

TEST(BlockCipher, RejectsWrongBlockLength) {
  const auto ctx = CipherContext::expand_key(Bytes(16, 0));
  expect_error(ErrorCode::InvalidBlockLength, [&] { ctx.encrypt_block(Bytes(17, 0)); });
  expect_error(ErrorCode::InvalidBlockLength, [&] { ctx.encrypt_block(Bytes{}); });
  expect_error(ErrorCode::InvalidBlockLength, [&] { ctx.decrypt_block(Bytes{}); });
  expect_error(ErrorCode::InvalidBlockLength, [&] { ctx.decrypt_block(Bytes(15, 0)); });
}

TEST(BlockCipher, DeterministicAndContextUnchanged) {
  const auto ctx = CipherContext::expand_key(from_hex("2b7e151628aed2a6abf7158809cf4f3c"));
  const Bytes before(ctx.round_keys().begin(), ctx.round_keys().end());
  const Bytes block = from_hex("6bc1bee22e409f96e93d7e117393172a");
  EXPECT_EQ(ctx.encrypt_block(block), ctx.encrypt_block(block));
  EXPECT_EQ(Bytes(ctx.round_keys().begin(), ctx.round_keys().end()), before);
  EXPECT_EQ(ctx.iv(), Block{});
}

TEST(BlockCipher, Avalanche) {
  std::mt19937_64 rng(2024);
  const auto ctx = CipherContext::expand_key(testing::random_key(rng));
  constexpr int kTrials = 2000;
  double total = 0;
  for (int t = 0; t < kTrials; ++t) {
    Bytes block = testing::random_bytes(rng, 16);
    const Block a = ctx.encrypt_block(block);
    const auto bit = rng() % 128;
    block[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    const Block b = ctx.encrypt_block(block);
    int distance = 0;
    for (std::size_t i = 0; i < 16; ++i) distance += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
    total += distance;
  }
  const double mean = total / kTrials;
  EXPECT_GE(mean, 54.0);
  EXPECT_LE(mean, 74.0);
}

TEST(BlockCipher, SharedContextAcrossThreads) {
  const auto ctx = CipherContext::expand_key(from_hex("000102030405060708090a0b0c0d0e0f"));
  const Bytes plain = from_hex("00112233445566778899aabbccddeeff");
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 2000; ++i) {
        if (to_hex(ctx.encrypt_block(plain)) != "69c4e0d86a7b0430d8cdb78070b4c55a") ++mismatches;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(mismatches.load(), 0);
}

}  // namespace
}  // namespace securecam
