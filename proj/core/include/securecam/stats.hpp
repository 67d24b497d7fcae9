#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <mutex>
#include <vector>

namespace securecam {

struct Percentiles {
  double p50 = 0;
  double p95 = 0;
  double p99 = 0;
};

/// Nearest-rank percentiles; all zero for an empty sample.
Percentiles percentiles(std::vector<double> samples);

struct StreamStats {
  double fps = 0;
  double bytes_per_s = 0;
  Percentiles encrypt_latency_us;
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_captured = 0;
};

/// Device-side counters. Rates and latency percentiles cover the trailing
/// window (5 s by default); the frame counters are cumulative.
class StreamStatsTracker {
 public:
  using Clock = std::chrono::steady_clock;

  explicit StreamStatsTracker(Clock::duration window = std::chrono::seconds(5))
      : window_(window) {}

  void record_capture(double encrypt_latency_us, Clock::time_point at = Clock::now());
  void record_sent(std::size_t bytes, Clock::time_point at = Clock::now());

  StreamStats snapshot(Clock::time_point now = Clock::now()) const;

 private:
  struct Capture {
    Clock::time_point at;
    double latency_us;
  };
  struct Send {
    Clock::time_point at;
    std::size_t bytes;
  };

  void evict(Clock::time_point now) const;

  Clock::duration window_;
  mutable std::mutex mutex_;
  mutable std::deque<Capture> captures_;
  mutable std::deque<Send> sends_;
  std::uint64_t frames_sent_ = 0;
  std::uint64_t frames_captured_ = 0;
  Clock::time_point started_ = Clock::now();
};

}  // namespace securecam
