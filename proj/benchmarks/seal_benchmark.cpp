#include <benchmark/benchmark.h>

#include "securecam/aes.hpp"
#include "securecam/jpeg.hpp"
#include "securecam/modes.hpp"
#include "securecam/secure_stream.hpp"

namespace {

using namespace securecam;

Bytes key_of(int bits) { return Bytes(static_cast<std::size_t>(bits / 8), 0x5c); }

void BM_KeyExpansion(benchmark::State& state) {
  const Bytes key = key_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(CipherContext::expand_key(key));
}
BENCHMARK(BM_KeyExpansion)->Arg(128)->Arg(192)->Arg(256);

void BM_EncryptBlock(benchmark::State& state) {
  const auto ctx = CipherContext::expand_key(key_of(static_cast<int>(state.range(0))));
  Block block{};
  for (auto _ : state) {
    ctx.encrypt_in_place(block.data());
    benchmark::DoNotOptimize(block);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 16);
}
BENCHMARK(BM_EncryptBlock)->Arg(128)->Arg(192)->Arg(256);

void BM_DecryptBlock(benchmark::State& state) {
  const auto ctx = CipherContext::expand_key(key_of(static_cast<int>(state.range(0))));
  Block block{};
  for (auto _ : state) {
    ctx.decrypt_in_place(block.data());
    benchmark::DoNotOptimize(block);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 16);
}
BENCHMARK(BM_DecryptBlock)->Arg(128)->Arg(256);

// Args: mode tag, key bits, frame bytes.
void BM_SealFrame(benchmark::State& state) {
  const auto mode = static_cast<CipherMode>(state.range(0));
  const KeyConfig cfg{0, key_of(static_cast<int>(state.range(1))), mode};
  Frame frame;
  frame.seq = 1;
  frame.jpeg = jpeg::make_synthetic(1, 1, static_cast<std::size_t>(state.range(2)));
  std::uint32_t seq = 0;
  for (auto _ : state) benchmark::DoNotOptimize(seal_frame(frame, cfg, ++seq));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(2));
}
BENCHMARK(BM_SealFrame)
    ->ArgNames({"mode", "bits", "bytes"})
    ->ArgsProduct({{static_cast<int>(CipherMode::CBC), static_cast<int>(CipherMode::CTR)},
                   {128, 256},
                   {2048, 30000, 122880}});

void BM_OpenFrame(benchmark::State& state) {
  const auto mode = static_cast<CipherMode>(state.range(0));
  const KeyConfig cfg{0, key_of(128), mode};
  Frame frame;
  frame.seq = 1;
  frame.jpeg = jpeg::make_synthetic(1, 1, static_cast<std::size_t>(state.range(1)));
  const auto sealed = seal_frame(frame, cfg, 1);
  for (auto _ : state) benchmark::DoNotOptimize(open_frame(sealed, cfg));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(1));
}
BENCHMARK(BM_OpenFrame)
    ->ArgNames({"mode", "bytes"})
    ->ArgsProduct({{static_cast<int>(CipherMode::CBC), static_cast<int>(CipherMode::CTR)}, {30000}});

void BM_WireCodec(benchmark::State& state) {
  const KeyConfig cfg{0, key_of(128), CipherMode::CTR};
  Frame frame;
  frame.jpeg = jpeg::make_synthetic(1, 1, 30000);
  const auto sealed = seal_frame(frame, cfg, 1);
  for (auto _ : state) benchmark::DoNotOptimize(decode_wire(encode_wire(sealed)));
}
BENCHMARK(BM_WireCodec);

}  // namespace
BENCHMARK_MAIN();
