#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/random_scripts.hpp"
#include "vista/trajectory/smoother.hpp"

using namespace vista;

namespace {

double max_speed(const TimedTrajectory& t) {
  double m = 0.0;
  for (const auto& s : t.samples) m = std::max(m, s.speed);
  return m;
}

// Every key-waypoint position is within `eps` of some sample.
bool passes_near_all(const TimedTrajectory& t, const std::vector<KeyWaypoint>& kws, double eps) {
  for (const auto& kw : kws) {
    double best = 1e300;
    for (const auto& s : t.samples) best = std::min(best, distance(s.pose.position(), kw.pose.position()));
    if (best > eps) return false;
  }
  return true;
}

}  // namespace

TEST(Smooth, StraightHundredMetres) {
  auto t = smooth({{{0, 0, 0}, 10.0, 0.0}, {{100, 0, 0}, 10.0, 0.0}}, 13.9, 0.1);
  EXPECT_NEAR(t.duration(), 10.0, 1e-9);
  EXPECT_EQ(t.samples.size(), 101u);
  EXPECT_NEAR(t.samples.back().pose.x, 100.0, 0.1);
  for (const auto& s : t.samples) EXPECT_NEAR(s.speed, 10.0, 1e-6);
}

TEST(Smooth, SpeedIsCapped) {
  auto t = smooth({{{0, 0, 0}, 20.0, 0.0}, {{80, 5, 0.3}, 20.0, 0.0}, {{150, 0, 0}, 20.0, 0.0}}, 10.0, 0.1);
  EXPECT_LE(max_speed(t), 10.0 + 1e-9);
  EXPECT_NEAR(t.samples.back().pose.x, 150.0, 1e-9);
}

TEST(Smooth, HoldDwellsInPlace) {
  std::vector<KeyWaypoint> kws = {{{0, 0, 0}, 5.0, 0.0}, {{20, 0, 0}, 0.0, 3.0}, {{40, 0, 0}, 5.0, 0.0}};
  const double dt = 0.1;
  auto t = smooth(kws, 10.0, dt);
  std::size_t best = 0, run = 0;
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    run = t.samples[i].pose == t.samples[i - 1].pose ? run + 1 : 0;
    best = std::max(best, run);
  }
  EXPECT_GE(best + 1, static_cast<std::size_t>(3.0 / dt));
}

TEST(Smooth, StopHoldMergesIntoPreviousWaypoint) {
  auto script = std::vector<ManeuverL1>{ManeuverL1::straight(20, 5), ManeuverL1::stop_hold(2.0),
                                        ManeuverL1::straight(10, 5)};
  auto kws = testgen::to_global({}, 5.0, script);
  auto t = smooth(kws, 5.0, 0.1);
  int at_stop = 0;
  for (const auto& s : t.samples)
    if (std::abs(s.pose.x - 20.0) < 1e-12 && s.speed == 0.0) ++at_stop;
  EXPECT_GE(at_stop, 20);
  EXPECT_NEAR(t.samples.back().pose.x, 30.0, 1e-9);
}

TEST(Smooth, RejectsBadInput) {
  EXPECT_THROW(smooth({{{0, 0, 0}, 1.0, 0.0}}, 10.0, 0.1), InvalidParams);
  EXPECT_THROW(smooth({{{0, 0, 0}, 1.0, 0.0}, {{1, 0, 0}, 1.0, 0.0}}, 0.0, 0.1), InvalidParams);
  EXPECT_THROW(smooth({{{0, 0, 0}, 1.0, 0.0}, {{1, 0, 0}, 1.0, 0.0}}, 10.0, 0.0), InvalidParams);
  EXPECT_THROW(smooth({{{0, 0, 0}, -1.0, 0.0}, {{1, 0, 0}, 1.0, 0.0}}, 10.0, 0.1), InvalidParams);
}

TEST(Smooth, RandomScriptsKeepContracts) {
  std::mt19937_64 gen(11);
  const double dt = 0.1;
  for (int k = 0; k < 50; ++k) {
    auto kws = testgen::to_global({0, 0, 0}, 5.0, testgen::random_l1_script(gen));
    const double cap = 12.0;
    auto t = smooth(kws, cap, dt);

    EXPECT_TRUE(passes_near_all(t, kws, 0.1)) << "script " << k;
    EXPECT_LE(max_speed(t), cap + 1e-9);
    for (std::size_t i = 0; i + 1 < t.segments.size(); ++i) {
      const auto& a = t.segments[i];
      const auto& b = t.segments[i + 1];
      EXPECT_LT((a.velocity(a.duration) - b.velocity(0.0)).norm(), 1e-6);
    }
    for (std::size_t i = 1; i + 1 < t.samples.size(); ++i) {
      const auto& s = t.samples[i];
      if (s.speed <= 0.5 || t.samples[i - 1].speed == 0.0 || t.samples[i + 1].speed == 0.0) continue;
      const double fd = distance(t.samples[i + 1].pose.position(), t.samples[i - 1].pose.position()) / (2 * dt);
      EXPECT_NEAR(fd, s.speed, 0.15 * s.speed) << "script " << k << " sample " << i;
    }
  }
}

TEST(Smooth, Deterministic) {
  std::mt19937_64 gen(5);
  auto kws = testgen::to_global({3, 4, 1}, 2.0, testgen::random_l1_script(gen));
  EXPECT_EQ(smooth(kws, 9.0, 0.05).samples, smooth(kws, 9.0, 0.05).samples);
}
