#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "securecam/modes.hpp"
#include "securecam/stats.hpp"
#include "securecam/viewer_relay.hpp"

namespace securecam::bench {

struct MicroOptions {
  std::vector<CipherMode> modes = {CipherMode::CBC, CipherMode::CTR};
  std::vector<int> key_bits = {128, 192, 256};
  std::vector<std::size_t> frame_sizes = {2048, 30000, 122880};
  std::size_t iterations = 1000;
  std::size_t warmup = 50;
  std::uint64_t seed = 1;
};

/// One (mode, key size, frame size) cell of the seal microbenchmark.
struct MicroCell {
  CipherMode mode = CipherMode::CTR;
  int key_bits = 128;
  std::size_t frame_bytes = 0;
  std::size_t iterations = 0;
  Percentiles seal_latency_us;
  std::uint64_t bytes_processed = 0;
  double wall_time_s = 0;
  /// bytes_processed / wall_time_s / 1e6
  double mb_per_s = 0;
  /// ciphertext length minus plaintext length; constant per cell
  std::int64_t expansion_bytes = 0;
};

/// Seals deterministic synthetic frames (seeded) `iterations` times per
/// cell after discarding `warmup` runs. Single-threaded.
/// Throws Error(BadConfig) if iterations < 100.
std::vector<MicroCell> run_micro(const MicroOptions& options);

struct E2eOptions {
  int fps_limit = 10;
  int framesize = 5;
  std::chrono::milliseconds duration{10000};
  bool encrypted = true;
  CipherMode mode = CipherMode::CTR;
  std::uint64_t seed = 1;
};

struct E2eResult {
  bool encrypted = true;
  int fps_limit = 0;
  int framesize = 0;
  double duration_s = 0;
  double achieved_fps = 0;
  /// Device-side seal latency over the final stats window.
  Percentiles encrypt_latency_us;
  RelayReport relay;
};

/// Runs a loopback device server and relay for `duration` and measures the
/// rate of validated frames at the relay. A zero duration returns an empty
/// result without starting anything. Throws Error(FrameRejected) if an
/// encrypted run rejects any frame.
E2eResult run_e2e(const E2eOptions& options);

struct BenchReport {
  std::vector<MicroCell> micro;
  std::vector<E2eResult> e2e;
};

std::string report_to_json(const BenchReport& report);

/// --suite micro|e2e|all, --modes, --key-bits, --sizes, --iters, --duration,
/// --fps, --framesize, --seed, --allow-ecb, --json <path>.
int run_bench_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace securecam::bench
