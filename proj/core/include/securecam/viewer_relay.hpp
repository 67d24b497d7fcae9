#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "securecam/key_config.hpp"
#include "securecam/stats.hpp"

namespace securecam {

struct RelayReport {
  std::uint64_t parts_consumed = 0;
  std::uint64_t frames_ok = 0;
  std::uint64_t frames_rejected = 0;
  std::map<std::string, std::uint64_t> rejected_by_cause;
  std::uint64_t seq_gaps = 0;
  bool seq_strictly_increasing = true;
  std::optional<std::uint32_t> first_seq;
  std::optional<std::uint32_t> last_seq;
  Percentiles decrypt_latency_us;
  std::uint64_t bytes_ok = 0;
  double throughput_bytes_per_s = 0;
  /// (frames_ok - 1) / time between the first and last accepted frame.
  double achieved_fps = 0;
  double duration_s = 0;
  std::string ended_by;  // count | duration | disconnect | error
  std::optional<std::string> transport_error;
};

std::string report_to_json(const RelayReport& report);

/// Where validated plaintext goes. Sinks see frames in arrival order.
class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void emit(std::uint32_t seq, ByteView jpeg) = 0;
};

class NullSink final : public FrameSink {
 public:
  void emit(std::uint32_t, ByteView) override { ++count_; }
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_ = 0;
};

/// Writes frame_<seq>.jpg. Throws Error(IoFailure) on any write error.
class DirSink final : public FrameSink {
 public:
  explicit DirSink(std::filesystem::path dir);
  void emit(std::uint32_t seq, ByteView jpeg) override;

 private:
  std::filesystem::path dir_;
};

/// Re-serves validated frames on localhost as a standard MJPEG stream:
///   GET /stream   multipart/x-mixed-replace; boundary=frame, image/jpeg parts
///   GET /latest   most recent frame as image/jpeg (404 before the first)
///   GET /still    fetches the device's /saved-photo, opens it, returns image/jpeg
class MjpegSink final : public FrameSink {
 public:
  /// device_base_url and keys back /still; leave the URL empty to disable it.
  MjpegSink(std::string host, int port, std::string device_base_url, KeyRing keys);
  ~MjpegSink() override;

  void emit(std::uint32_t seq, ByteView jpeg) override;
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RelayOptions {
  std::string url;  // http://host:port/stream
  KeyRing keys;
  std::optional<std::uint64_t> count;
  std::optional<std::chrono::milliseconds> duration;
  /// Accept raw image/jpeg parts (plaintext baseline benchmark only).
  bool accept_plaintext = false;
  /// Reconnect this many times after a dropped connection.
  int reconnect_attempts = 0;
  std::chrono::milliseconds reconnect_delay{200};
  std::chrono::seconds read_timeout{3};
};

/// Pulls the device stream, opens every part, and passes validated JPEGs to
/// the sink. Rejected parts never reach the sink. Connection failures are
/// reported in transport_error rather than thrown; sink failures
/// (Error(IoFailure)) propagate.
RelayReport consume_stream(const RelayOptions& options, FrameSink& sink);

/// Relay command line: --url, --key-file, --sink null|dir|mjpeg, --out-dir,
/// --listen-port, --count, --duration, --report-json. Exit 0 when no frame
/// was rejected and no transport error occurred, 1 otherwise, 2 on bad flags.
int run_relay_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

/// Accepts http://host[:port][/path]. Throws Error(BadConfig).
ParsedUrl parse_http_url(std::string_view url);

}  // namespace securecam
