#include "securecam/frame_source.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>

#include "securecam/error.hpp"
#include "securecam/jpeg.hpp"

namespace securecam {
namespace {

constexpr std::array<Resolution, kMaxFramesize + 1> kResolutions = {{
    {96, 96},
    {160, 120},
    {176, 144},
    {240, 176},
    {320, 240},
    {400, 296},
    {640, 480},
    {800, 600},
    {1024, 768},
    {1280, 1024},
    {1600, 1200},
}};

constexpr std::array<std::size_t, kMaxFramesize + 1> kTargetBytes = {
    2 * 1024, 3 * 1024, 4 * 1024, 6 * 1024, 8 * 1024, 12 * 1024,
    20 * 1024, 32 * 1024, 48 * 1024, 80 * 1024, 120 * 1024,
};

struct FieldRange {
  std::string_view name;
  int CameraSettings::*field;
  int lo;
  int hi;
};

constexpr std::array<FieldRange, 5> kFields = {{
    {"framesize", &CameraSettings::framesize, 0, kMaxFramesize},
    {"quality", &CameraSettings::quality, 10, 63},
    {"brightness", &CameraSettings::brightness, -2, 2},
    {"contrast", &CameraSettings::contrast, -2, 2},
    {"fps_limit", &CameraSettings::fps_limit, 1, 30},
}};

std::string range_message(const FieldRange& f, int val) {
  return std::string(f.name) + "=" + std::to_string(val) + " outside [" +
         std::to_string(f.lo) + ", " + std::to_string(f.hi) + "]";
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed: " + path.string());
  return data;
}

}  // namespace

Resolution resolution_for(int framesize) {
  if (framesize < 0 || framesize > kMaxFramesize) {
    throw Error(ErrorCode::OutOfRange, "framesize " + std::to_string(framesize));
  }
  return kResolutions[static_cast<std::size_t>(framesize)];
}

std::size_t target_frame_bytes(int framesize, int quality) {
  validate(CameraSettings{.framesize = framesize, .quality = quality});
  return kTargetBytes[static_cast<std::size_t>(framesize)] *
         static_cast<std::size_t>(64 - quality) / 54;
}

void validate(const CameraSettings& settings) {
  for (const auto& f : kFields) {
    const int v = settings.*(f.field);
    if (v < f.lo || v > f.hi) throw Error(ErrorCode::OutOfRange, range_message(f, v));
  }
}

CameraSettings apply_control(CameraSettings settings, std::string_view var, int val) {
  const auto it = std::find_if(kFields.begin(), kFields.end(),
                               [var](const FieldRange& f) { return f.name == var; });
  if (it == kFields.end()) {
    throw Error(ErrorCode::UnknownVar, "no control named '" + std::string(var) + "'");
  }
  if (val < it->lo || val > it->hi) throw Error(ErrorCode::OutOfRange, range_message(*it, val));
  settings.*(it->field) = val;
  return settings;
}

FrameSource FrameSource::generator(std::uint64_t seed) {
  FrameSource src;
  src.seed_ = seed;
  return src;
}

FrameSource FrameSource::directory(const std::filesystem::path& dir) {
  FrameSource src;
  src.dir_mode_ = true;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::IoFailure, "not a directory: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jpg") {
      src.files_.push_back(entry.path());
    }
  }
  std::sort(src.files_.begin(), src.files_.end());
  return src;
}

Frame FrameSource::next_frame(const CameraSettings& settings) {
  Frame frame;
  frame.settings = settings;
  if (dir_mode_) {
    if (files_.empty()) throw Error(ErrorCode::SourceExhausted, "frame directory has no *.jpg files");
    const auto& path = files_[next_file_];
    frame.jpeg = read_file(path);
    if (!jpeg::has_magic(frame.jpeg)) {
      throw Error(ErrorCode::CorruptImage, path.string() + " lacks SOI/EOI markers");
    }
    next_file_ = (next_file_ + 1) % files_.size();
  } else {
    // Brightness and contrast only perturb the filler, so a settings change
    // is visible in the bytes without affecting the size target.
    const std::uint64_t tone = static_cast<std::uint64_t>(settings.brightness + 2) * 5 +
                               static_cast<std::uint64_t>(settings.contrast + 2);
    frame.jpeg = jpeg::make_synthetic(seed_ ^ (tone << 56), seq_ + 1,
                                      target_frame_bytes(settings.framesize, settings.quality));
  }
  frame.seq = ++seq_;
  frame.timestamp_ms = now_ms_since_epoch();
  return frame;
}

bool FramePacer::wait(int fps_limit, std::stop_token stop) {
  std::unique_lock lock(mutex_);
  if (last_) {
    const auto period = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(1.0 / std::max(fps_limit, 1)));
    const auto deadline = *last_ + period;
    while (Clock::now() < deadline) {
      if (cv_.wait_until(lock, stop, deadline, [] { return false; }); stop.stop_requested()) {
        return false;
      }
    }
  }
  if (stop.stop_requested()) return false;
  last_ = Clock::now();
  return true;
}

void FramePacer::interrupt() { cv_.notify_all(); }

std::uint64_t now_ms_since_epoch() {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count());
}

}  // namespace securecam
