#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "securecam/frame_source.hpp"
#include "securecam/secure_stream.hpp"
#include "securecam/stats.hpp"

namespace securecam {

struct DeviceOptions {
  std::string bind = "127.0.0.1";
  int port = 8032;  // 0 picks an ephemeral port
  KeyConfig key;
  bool allow_ecb = false;
  std::optional<std::filesystem::path> frames_dir;
  std::uint64_t seed = 1;
  CameraSettings settings;
  /// Directory holding an index.html to serve at "/" (and its assets under
  /// /ui/). The embedded placeholder page is used when absent.
  std::optional<std::filesystem::path> ui_dir;
  int worker_threads = 16;
  /// false streams raw JPEG parts. Only the benchmark's plaintext baseline
  /// sets this; no CLI flag exposes it.
  bool encrypt = true;
};

/// The camera device: one capture loop producing paced frames, sealing them,
/// and broadcasting the sealed records to every /stream connection.
///
/// Endpoints:
///   GET /             UI page (text/html)
///   GET /capture      sets the capture flag; 200 text/plain "Taking Photo"
///   GET /saved-photo  latest sealed still as an SFRM record, 404 before any
///   GET /stream       multipart/x-mixed-replace; boundary=secureframe,
///                     one SFRM record per part
///   GET /control?var=<name>&val=<int>   200 or 400 with the reason
///   GET /status       JSON settings, mode, key_id and stats
class DeviceServer {
 public:
  /// Validates options. Throws Error(InsecureModeRejected) for ECB without
  /// allow_ecb, Error(OutOfRange) for bad settings, Error(SourceExhausted)
  /// for an empty frames directory.
  explicit DeviceServer(DeviceOptions options);
  ~DeviceServer();

  DeviceServer(const DeviceServer&) = delete;
  DeviceServer& operator=(const DeviceServer&) = delete;

  /// Binds and starts the capture loop and HTTP workers. Throws
  /// Error(IoFailure) if the address cannot be bound.
  void start();
  /// Idempotent; ends open streams and joins all threads.
  void stop();

  int port() const;
  std::string base_url() const;

  CameraSettings settings() const;
  bool capture_pending() const;
  StreamStats stats() const;
  std::string status_json() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Parses device CLI flags (--bind, --port, --mode, --key-file, --frames-dir,
/// --seed, --fps, --framesize, --allow-ecb, --ui-dir). On --help or a parse
/// error, returns the exit code after writing usage (0 for help, 2 for errors).
std::variant<DeviceOptions, int> parse_device_cli(const std::vector<std::string>& args,
                                                  std::ostream& out, std::ostream& err);

}  // namespace securecam
