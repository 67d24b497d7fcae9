#include "securecam/stats.hpp"

#include <algorithm>
#include <cmath>

namespace securecam {

Percentiles percentiles(std::vector<double> samples) {
  if (samples.empty()) return {};
  std::sort(samples.begin(), samples.end());
  const auto rank = [&](double p) {
    const auto n = static_cast<double>(samples.size());
    const auto idx = static_cast<std::size_t>(std::max(1.0, std::ceil(p / 100.0 * n))) - 1;
    return samples[std::min(idx, samples.size() - 1)];
  };
  return {rank(50), rank(95), rank(99)};
}

void StreamStatsTracker::record_capture(double encrypt_latency_us, Clock::time_point at) {
  std::lock_guard lock(mutex_);
  captures_.push_back({at, encrypt_latency_us});
  ++frames_captured_;
  evict(at);
}

void StreamStatsTracker::record_sent(std::size_t bytes, Clock::time_point at) {
  std::lock_guard lock(mutex_);
  sends_.push_back({at, bytes});
  ++frames_sent_;
  evict(at);
}

void StreamStatsTracker::evict(Clock::time_point now) const {
  const auto cutoff = now - window_;
  while (!captures_.empty() && captures_.front().at < cutoff) captures_.pop_front();
  while (!sends_.empty() && sends_.front().at < cutoff) sends_.pop_front();
}

StreamStats StreamStatsTracker::snapshot(Clock::time_point now) const {
  std::lock_guard lock(mutex_);
  evict(now);

  // Before a full window has elapsed, divide by the time actually observed.
  const double span_s =
      std::chrono::duration<double>(std::min(window_, now - started_)).count();

  StreamStats s;
  s.frames_sent = frames_sent_;
  s.frames_captured = frames_captured_;
  if (span_s > 0) {
    s.fps = static_cast<double>(captures_.size()) / span_s;
    std::size_t bytes = 0;
    for (const auto& e : sends_) bytes += e.bytes;
    s.bytes_per_s = static_cast<double>(bytes) / span_s;
  }
  std::vector<double> lat;
  lat.reserve(captures_.size());
  for (const auto& c : captures_) lat.push_back(c.latency_us);
  s.encrypt_latency_us = percentiles(std::move(lat));
  return s;
}

}  // namespace securecam
