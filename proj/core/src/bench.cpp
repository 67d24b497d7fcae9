#include "securecam/bench.hpp"

#include <fstream>
#include <iomanip>

#include <CLI11.hpp>
#include <json.hpp>

#include "securecam/device_server.hpp"
#include "securecam/error.hpp"
#include "securecam/jpeg.hpp"
#include "securecam/secure_stream.hpp"
#include "securecam/splitmix.hpp"

namespace securecam::bench {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kFramePool = 4;

Bytes bench_key(std::uint64_t seed, int key_bits) {
  SplitMix64 rng(seed * 31 + static_cast<std::uint64_t>(key_bits));
  Bytes key(static_cast<std::size_t>(key_bits / 8));
  for (auto& b : key) b = static_cast<std::uint8_t>(rng.next());
  return key;
}

nlohmann::json percentiles_json(const Percentiles& p) {
  return {{"p50", p.p50}, {"p95", p.p95}, {"p99", p.p99}};
}

}  // namespace

std::vector<MicroCell> run_micro(const MicroOptions& options) {
  if (options.iterations < 100) {
    throw Error(ErrorCode::BadConfig, "at least 100 measured iterations are required");
  }
  std::vector<MicroCell> cells;
  for (const std::size_t size : options.frame_sizes) {
    std::vector<Frame> pool;
    for (std::uint32_t i = 0; i < kFramePool; ++i) {
      Frame f;
      f.seq = i + 1;
      f.jpeg = jpeg::make_synthetic(options.seed, f.seq, size);
      pool.push_back(std::move(f));
    }
    for (const CipherMode mode : options.modes) {
      for (const int bits : options.key_bits) {
        const KeyConfig cfg{0, bench_key(options.seed, bits), mode};
        for (std::size_t i = 0; i < options.warmup; ++i) {
          (void)seal_frame(pool[i % kFramePool], cfg, static_cast<std::uint32_t>(i));
        }

        MicroCell cell;
        cell.mode = mode;
        cell.key_bits = bits;
        cell.frame_bytes = pool.front().jpeg.size();
        cell.iterations = options.iterations;
        std::vector<double> latencies;
        latencies.reserve(options.iterations);
        std::optional<std::int64_t> expansion;

        const auto start = Clock::now();
        for (std::size_t i = 0; i < options.iterations; ++i) {
          const Frame& frame = pool[i % kFramePool];
          const auto t0 = Clock::now();
          const auto enc = seal_frame(frame, cfg, static_cast<std::uint32_t>(i));
          const auto t1 = Clock::now();
          latencies.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
          const auto grow = static_cast<std::int64_t>(enc.ciphertext.size()) -
                            static_cast<std::int64_t>(frame.jpeg.size());
          if (expansion && *expansion != grow) {
            throw Error(ErrorCode::LengthMismatch, "expansion varied within one cell");
          }
          expansion = grow;
          cell.bytes_processed += frame.jpeg.size();
        }
        cell.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
        cell.mb_per_s = static_cast<double>(cell.bytes_processed) / cell.wall_time_s / 1e6;
        cell.expansion_bytes = expansion.value_or(0);
        cell.seal_latency_us = percentiles(std::move(latencies));
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

E2eResult run_e2e(const E2eOptions& options) {
  E2eResult result;
  result.encrypted = options.encrypted;
  result.fps_limit = options.fps_limit;
  result.framesize = options.framesize;
  if (options.duration.count() <= 0) return result;

  DeviceOptions dev;
  dev.port = 0;
  dev.seed = options.seed;
  dev.key = KeyConfig{0, bench_key(options.seed, 128), options.mode};
  dev.allow_ecb = true;
  dev.encrypt = options.encrypted;
  dev.settings.fps_limit = options.fps_limit;
  dev.settings.framesize = options.framesize;
  DeviceServer server(dev);
  server.start();

  RelayOptions relay;
  relay.url = server.base_url() + "/stream";
  relay.keys = KeyRing({dev.key});
  relay.duration = options.duration;
  relay.accept_plaintext = !options.encrypted;
  NullSink sink;
  result.relay = consume_stream(relay, sink);
  result.encrypt_latency_us = server.stats().encrypt_latency_us;
  server.stop();

  result.duration_s = result.relay.duration_s;
  result.achieved_fps = result.relay.achieved_fps;
  if (options.encrypted && result.relay.frames_rejected > 0) {
    throw Error(ErrorCode::FrameRejected, std::to_string(result.relay.frames_rejected) +
                                              " frames rejected with the correct key");
  }
  return result;
}

std::string report_to_json(const BenchReport& report) {
  nlohmann::json micro = nlohmann::json::array();
  for (const auto& c : report.micro) {
    micro.push_back({
        {"mode", std::string(to_string(c.mode))},
        {"key_bits", c.key_bits},
        {"frame_bytes", c.frame_bytes},
        {"iterations", c.iterations},
        {"seal_latency_us", percentiles_json(c.seal_latency_us)},
        {"bytes_processed", c.bytes_processed},
        {"wall_time_s", c.wall_time_s},
        {"mb_per_s", c.mb_per_s},
        {"expansion_bytes", c.expansion_bytes},
    });
  }
  nlohmann::json e2e = nlohmann::json::array();
  for (const auto& r : report.e2e) {
    e2e.push_back({
        {"encrypted", r.encrypted},
        {"fps_limit", r.fps_limit},
        {"framesize", r.framesize},
        {"duration_s", r.duration_s},
        {"achieved_fps", r.achieved_fps},
        {"frames_ok", r.relay.frames_ok},
        {"frames_rejected", r.relay.frames_rejected},
        {"encrypt_latency_us", percentiles_json(r.encrypt_latency_us)},
        {"decrypt_latency_us", percentiles_json(r.relay.decrypt_latency_us)},
    });
  }
  return nlohmann::json{{"micro", micro}, {"e2e", e2e}}.dump(2);
}

int run_bench_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SecureCam benchmark harness"};
  std::string suite = "micro";
  std::vector<std::string> mode_names = {"cbc", "ctr"};
  MicroOptions micro;
  double duration_s = 10;
  int fps = 10;
  int framesize = 5;
  bool allow_ecb = false;
  std::string json_path;

  app.add_option("--suite", suite, "micro, e2e or all")
      ->check(CLI::IsMember({"micro", "e2e", "all"}))
      ->capture_default_str();
  app.add_option("--modes", mode_names, "Comma-separated modes")->delimiter(',');
  app.add_option("--key-bits", micro.key_bits, "Comma-separated key sizes")->delimiter(',');
  app.add_option("--sizes", micro.frame_sizes, "Comma-separated frame sizes in bytes")->delimiter(',');
  app.add_option("--iters", micro.iterations, "Measured iterations per cell")->capture_default_str();
  app.add_option("--duration", duration_s, "End-to-end run length in seconds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--fps", fps, "End-to-end fps limit")->check(CLI::Range(1, 30))->capture_default_str();
  app.add_option("--framesize", framesize, "End-to-end framesize class")
      ->check(CLI::Range(0, 10))
      ->capture_default_str();
  app.add_option("--seed", micro.seed, "Workload seed")->capture_default_str();
  app.add_flag("--allow-ecb", allow_ecb, "Permit ecb in --modes");
  app.add_option("--json", json_path, "Write the report as JSON");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  micro.modes.clear();
  try {
    for (const auto& name : mode_names) {
      const auto mode = parse_mode(name);
      if (!mode) throw Error(ErrorCode::BadConfig, "unknown mode '" + name + "'");
      require_mode_allowed(*mode, allow_ecb);
      micro.modes.push_back(*mode);
    }
    for (const int bits : micro.key_bits) {
      if (bits != 128 && bits != 192 && bits != 256) {
        throw Error(ErrorCode::BadConfig, "key bits must be 128, 192 or 256");
      }
    }
    if (micro.iterations < 100) throw Error(ErrorCode::BadConfig, "--iters must be >= 100");
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }

  BenchReport report;
  try {
    if (suite == "micro" || suite == "all") {
      report.micro = run_micro(micro);
      out << std::left << std::setw(5) << "mode" << std::setw(6) << "bits" << std::setw(9)
          << "bytes" << std::setw(10) << "p50 us" << std::setw(10) << "p95 us" << std::setw(10)
          << "p99 us" << std::setw(10) << "MB/s" << "expansion\n";
      for (const auto& c : report.micro) {
        out << std::setw(5) << to_string(c.mode) << std::setw(6) << c.key_bits << std::setw(9)
            << c.frame_bytes << std::setw(10) << c.seal_latency_us.p50 << std::setw(10)
            << c.seal_latency_us.p95 << std::setw(10) << c.seal_latency_us.p99 << std::setw(10)
            << c.mb_per_s << c.expansion_bytes << "\n";
      }
    }
    if (suite == "e2e" || suite == "all") {
      E2eOptions e2e;
      e2e.fps_limit = fps;
      e2e.framesize = framesize;
      e2e.duration = std::chrono::milliseconds(static_cast<std::int64_t>(duration_s * 1000));
      e2e.seed = micro.seed;
      e2e.mode = micro.modes.empty() ? CipherMode::CTR : micro.modes.back();
      for (const bool encrypted : {false, true}) {
        e2e.encrypted = encrypted;
        report.e2e.push_back(run_e2e(e2e));
        const auto& r = report.e2e.back();
        out << (encrypted ? "encrypted" : "plaintext") << ": " << r.relay.frames_ok
            << " frames, achieved fps " << r.achieved_fps << ", seal p50 "
            << r.encrypt_latency_us.p50 << " us\n";
      }
      if (report.e2e.size() == 2) {
        out << "fps delta (encrypted - plaintext): "
            << report.e2e[1].achieved_fps - report.e2e[0].achieved_fps << "\n";
      }
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }

  if (!json_path.empty()) {
    std::ofstream f(json_path);
    f << report_to_json(report) << "\n";
    if (!f) {
      err << "cannot write " << json_path << "\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace securecam::bench
