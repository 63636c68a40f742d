#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "vista/geometry/pose.hpp"
#include "vista/geometry/rect.hpp"

using namespace vista;

TEST(Angle, NormalizeIntoHalfOpenRange) {
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(normalize_angle(-kPi / 2 - kTwoPi), -kPi / 2, 1e-12);
  EXPECT_NEAR(angle_diff(0.1, kTwoPi - 0.1), 0.2, 1e-12);
}

TEST(Pose, ComposeAndRelativeAreInverse) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-50, 50), h(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const Pose2 base{u(gen), u(gen), h(gen)}, local{u(gen), u(gen), h(gen)};
    const Pose2 back = relative_to(base, compose(base, local));
    EXPECT_NEAR(back.x, local.x, 1e-9);
    EXPECT_NEAR(back.y, local.y, 1e-9);
    EXPECT_NEAR(angle_diff(back.heading, local.heading), 0.0, 1e-12);
  }
}

TEST(Pose, ComposeRotatesLocalOffset) {
  const Pose2 p = compose({1, 2, kPi / 2}, {3, 0, 0});
  EXPECT_NEAR(p.x, 1, 1e-12);
  EXPECT_NEAR(p.y, 5, 1e-12);
  EXPECT_NEAR(p.heading, kPi / 2, 1e-12);
}

TEST(Rect, CornersCounterClockwiseFromFrontLeft) {
  const OrientedRect r{{0, 0}, 0, 4, 2};
  const auto c = r.corners();
  EXPECT_EQ(c[0], (Vec2{2, 1}));
  EXPECT_EQ(c[1], (Vec2{-2, 1}));
  EXPECT_EQ(c[2], (Vec2{-2, -1}));
  EXPECT_EQ(c[3], (Vec2{2, -1}));
}

TEST(Collision, AxisAlignedExamples) {
  const OrientedRect ego{{0, 0}, 0, 4, 2};
  EXPECT_FALSE(overlaps(ego, {{10, 0}, 0, 4, 2}));
  EXPECT_TRUE(overlaps(ego, {{3, 0}, 0, 4, 2}));
  EXPECT_TRUE(overlaps(ego, {{4, 0}, 0, 4, 2}));  // touching counts
  EXPECT_FALSE(overlaps(ego, {{4.001, 0}, 0, 4, 2}));
}

TEST(Collision, SkewedActorMatchesRasterOracle) {
  const OrientedRect ego{{0, 0}, 0, 4, 2};
  const OrientedRect actor{{3.2, 0}, kPi / 4, 4, 2};
  // The oracle decides; 3.2 is well inside the overlap region for a 45° body.
  const bool expected = oracle::raster_overlap(ego, actor);
  EXPECT_TRUE(expected);
  EXPECT_EQ(overlaps(ego, actor), expected);
  const OrientedRect far{{5.2, 0}, kPi / 4, 4, 2};
  EXPECT_EQ(overlaps(ego, far), oracle::raster_overlap(ego, far));
  EXPECT_FALSE(overlaps(ego, far));
}

TEST(Distance, ParallelAndDiagonal) {
  const OrientedRect a{{0, 0}, 0, 4, 2};
  EXPECT_NEAR(rect_distance(a, {{10, 0}, 0, 4, 2}), 6.0, 1e-12);
  EXPECT_NEAR(rect_distance(a, {{0, 5}, 0, 4, 2}), 3.0, 1e-12);
  EXPECT_NEAR(rect_distance(a, {{7, 5}, 0, 4, 2}), std::hypot(3.0, 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(rect_distance(a, {{1, 0}, 0.3, 4, 2}), 0.0);
}

TEST(Distance, MatchesSampledOracleOnRandomPairs) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> pos(-8, 8), h(-kPi, kPi), len(0.5, 6), wid(0.4, 2.5);
  for (int i = 0; i < 200; ++i) {
    const OrientedRect a{{0, 0}, h(gen), len(gen), wid(gen)};
    const OrientedRect b{{pos(gen), pos(gen)}, h(gen), len(gen), wid(gen)};
    if (overlaps(a, b)) continue;
    EXPECT_NEAR(rect_distance(a, b), oracle::sampled_distance(a, b), 0.01) << i;
  }
}

TEST(Segments, Intersection) {
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {1, 3}));  // endpoint touch
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));  // collinear, disjoint
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));   // collinear overlap
}

TEST(Segments, AgainstRectangle) {
  const OrientedRect r{{0, 0}, 0, 4, 2};
  EXPECT_TRUE(segment_intersects_rect({{-5, 0}, {5, 0}}, r));
  EXPECT_TRUE(segment_intersects_rect({{0.5, 0.2}, {0.6, 0.3}}, r));  // fully inside
  EXPECT_FALSE(segment_intersects_rect({{-5, 3}, {5, 3}}, r));
}
