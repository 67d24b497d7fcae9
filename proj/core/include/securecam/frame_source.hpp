#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "securecam/bytes.hpp"

namespace securecam {

/// Live camera knobs. Ranges: framesize 0..10, quality 10..63 (lower means
/// larger frames), brightness and contrast -2..2, fps_limit 1..30.
struct CameraSettings {
  int framesize = 5;
  int quality = 12;
  int brightness = 0;
  int contrast = 0;
  int fps_limit = 10;

  bool operator==(const CameraSettings&) const = default;
};

struct Resolution {
  int width = 0;
  int height = 0;
};

inline constexpr int kMaxFramesize = 10;

/// Nominal resolution for a framesize class; class 10 is 1600x1200.
Resolution resolution_for(int framesize);

/// Byte size the generator aims for: a fixed per-class target from 2 KiB
/// (class 0) to 120 KiB (class 10), scaled by (64 - quality) / 54.
std::size_t target_frame_bytes(int framesize, int quality);

/// Throws Error(OutOfRange) naming the first field outside its range.
void validate(const CameraSettings& settings);

/// Returns settings with `var` set to `val`. Throws Error(UnknownVar) for
/// names other than framesize, quality, brightness, contrast, fps_limit and
/// Error(OutOfRange) if val is outside that field's range.
CameraSettings apply_control(CameraSettings settings, std::string_view var, int val);

/// One captured image plus the settings that were in force for it.
struct Frame {
  std::uint32_t seq = 0;
  std::uint64_t timestamp_ms = 0;
  Bytes jpeg;
  CameraSettings settings;
};

/// The "take a new photo" flag: set by the HTTP handler, cleared by the
/// capture loop when it hands the next frame to the still path.
class CaptureFlag {
 public:
  void request() noexcept { pending_.store(true, std::memory_order_release); }
  /// Clears the flag, returning whether it was set.
  bool consume() noexcept { return pending_.exchange(false, std::memory_order_acq_rel); }
  bool pending() const noexcept { return pending_.load(std::memory_order_acquire); }

 private:
  std::atomic<bool> pending_{false};
};

/// Simulated camera. Generator mode synthesizes size-controlled JPEGs
/// deterministically from (seed, seq, settings); directory mode cycles the
/// `*.jpg` files of a directory in lexicographic order.
class FrameSource {
 public:
  static FrameSource generator(std::uint64_t seed);
  /// Lists the directory once. An empty listing is only reported when a
  /// frame is requested.
  static FrameSource directory(const std::filesystem::path& dir);

  /// Produces the next frame; seq is one more than the previous (first is 1).
  /// Throws Error(SourceExhausted) in directory mode with no files,
  /// Error(CorruptImage) if a file is not a JPEG, Error(IoFailure) on read errors.
  Frame next_frame(const CameraSettings& settings);

  std::uint32_t last_seq() const noexcept { return seq_; }
  bool is_directory() const noexcept { return dir_mode_; }
  std::size_t file_count() const noexcept { return files_.size(); }

 private:
  FrameSource() = default;

  std::uint64_t seed_ = 0;
  bool dir_mode_ = false;
  std::vector<std::filesystem::path> files_;
  std::size_t next_file_ = 0;
  std::uint32_t seq_ = 0;
};

/// Spaces frame emissions at least 1000/fps_limit ms apart, measured from
/// the previous emission. The first call returns immediately.
class FramePacer {
 public:
  using Clock = std::chrono::steady_clock;

  /// Returns false if stop was requested while waiting.
  bool wait(int fps_limit, std::stop_token stop = {});

  /// Wakes a waiter so it re-checks its stop token.
  void interrupt();

 private:
  std::mutex mutex_;
  std::condition_variable_any cv_;
  std::optional<Clock::time_point> last_;
};

std::uint64_t now_ms_since_epoch();

}  // namespace securecam
