#include <gtest/gtest.h>

#include <random>

#include "securecam/stats.hpp"

namespace securecam {
namespace {

using namespace std::chrono_literals;

TEST(Percentiles, NearestRank) {
  std::vector<double> s;
  for (int i = 1; i <= 100; ++i) s.push_back(i);
  std::shuffle(s.begin(), s.end(), std::mt19937(1));
  const auto p = percentiles(s);
  EXPECT_EQ(p.p50, 50);
  EXPECT_EQ(p.p95, 95);
  EXPECT_EQ(p.p99, 99);
}

TEST(Percentiles, SmallSamples) {
  EXPECT_EQ(percentiles({}).p99, 0);
  const auto one = percentiles({7});
  EXPECT_EQ(one.p50, 7);
  EXPECT_EQ(one.p99, 7);
  const auto five = percentiles({5, 1, 4, 2, 3});
  EXPECT_EQ(five.p50, 3);
  EXPECT_EQ(five.p95, 5);
}

TEST(Percentiles, Ordered) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0, 1000);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(1 + rng() % 500);
    for (auto& v : s) v = d(rng);
    const auto p = percentiles(s);
    ASSERT_LE(p.p50, p.p95);
    ASSERT_LE(p.p95, p.p99);
    ASSERT_LE(p.p99, *std::max_element(s.begin(), s.end()));
  }
}

TEST(Tracker, RatesOverWindow) {
  StreamStatsTracker tracker(5s);
  const auto t0 = StreamStatsTracker::Clock::now();
  for (int i = 0; i < 100; ++i) {
    const auto at = t0 + 10s + i * 100ms;
    tracker.record_capture(static_cast<double>(i), at);
    tracker.record_sent(1000, at);
  }
  const auto s = tracker.snapshot(t0 + 10s + 99 * 100ms);
  EXPECT_EQ(s.frames_captured, 100u);
  EXPECT_EQ(s.frames_sent, 100u);
  // 51 captures fall within the trailing 5 s.
  EXPECT_NEAR(s.fps, 51 / 5.0, 1e-9);
  EXPECT_NEAR(s.bytes_per_s, 51000 / 5.0, 1e-9);
  EXPECT_EQ(s.encrypt_latency_us.p99, 99);
  EXPECT_EQ(s.encrypt_latency_us.p50, 74);
}

TEST(Tracker, EmptyWindowIsZero) {
  StreamStatsTracker tracker(1s);
  const auto t0 = StreamStatsTracker::Clock::now();
  tracker.record_capture(5, t0);
  const auto s = tracker.snapshot(t0 + 3s);
  EXPECT_EQ(s.fps, 0);
  EXPECT_EQ(s.frames_captured, 1u);
  EXPECT_EQ(s.encrypt_latency_us.p50, 0);
}

}  // namespace
}  // namespace securecam
