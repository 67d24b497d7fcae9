#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>

namespace securecam {

/// Single-producer, many-consumer latest-value slot. Consumers that fall
/// behind skip straight to the newest value instead of queueing, so a slow
/// reader never holds up the producer.
template <typename T>
class LatestBroadcast {
 public:
  void publish(std::shared_ptr<const T> value) {
    {
      std::lock_guard lock(mutex_);
      latest_ = std::move(value);
      ++version_;
    }
    cv_.notify_all();
  }

  /// Blocks until a value newer than `seen` exists, the timeout expires or
  /// the broadcast is closed. Updates `seen` on success.
  std::shared_ptr<const T> wait_next(std::uint64_t& seen, std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    if (!cv_.wait_for(lock, timeout, [&] { return closed_ || version_ > seen; })) return nullptr;
    if (closed_) return nullptr;
    seen = version_;
    return latest_;
  }

  std::uint64_t version() const {
    std::lock_guard lock(mutex_);
    return version_;
  }

  std::shared_ptr<const T> latest() const {
    std::lock_guard lock(mutex_);
    return latest_;
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  bool closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::shared_ptr<const T> latest_;
  std::uint64_t version_ = 0;
  bool closed_ = false;
};

}  // namespace securecam
