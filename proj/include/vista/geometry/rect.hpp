#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vista/geometry/pose.hpp"

namespace vista {

/// Oriented rectangle: a vehicle body footprint centered on its pose.
struct OrientedRect {
  Vec2 center;
  double heading = 0.0;
  double length = 0.0;  // along heading
  double width = 0.0;   // across heading

  static OrientedRect from(const Pose2& pose, const BodyGeometry& body) {
    return {pose.position(), pose.heading, body.length, body.width};
  }

  Vec2 axis_long() const { return heading_vector(heading); }
  Vec2 axis_lat() const { return heading_vector(heading + kPi / 2.0); }

  // Counter-clockwise from front-left.
  std::array<Vec2, 4> corners() const {
    const Vec2 f = axis_long() * (length / 2.0);
    const Vec2 l = axis_lat() * (width / 2.0);
    return {center + f + l, center - f + l, center - f - l, center + f - l};
  }

  OrientedRect translated(Vec2 d) const { return {center + d, heading, length, width}; }
};

namespace detail {

inline void project(const std::array<Vec2, 4>& pts, Vec2 axis, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const Vec2& p : pts) {
    const double d = p.dot(axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

}  // namespace detail

/// Separating-axis test. Touching rectangles count as overlapping.
inline bool overlaps(const OrientedRect& a, const OrientedRect& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes{a.axis_long(), a.axis_lat(), b.axis_long(), b.axis_lat()};
  for (const Vec2& axis : axes) {
    double lo_a, hi_a, lo_b, hi_b;
    detail::project(ca, axis, lo_a, hi_a);
    detail::project(cb, axis, lo_b, hi_b);
    if (hi_a < lo_b || hi_b < lo_a) return false;
  }
  return true;
}

/// Euclidean distance between the nearest points of the two bodies; 0 when
/// they overlap.
inline double rect_distance(const OrientedRect& a, const OrientedRect& b) {
  if (overlaps(a, b)) return 0.0;
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, detail::point_segment_distance(ca[i], cb[j], cb[(j + 1) % 4]));
      best = std::min(best, detail::point_segment_distance(cb[i], ca[j], ca[(j + 1) % 4]));
    }
  }
  return best;
}

inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); };
  auto on_seg = [](Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
  };
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_seg(q1, q2, p1)) return true;
  if (d2 == 0 && on_seg(q1, q2, p2)) return true;
  if (d3 == 0 && on_seg(p1, p2, q1)) return true;
  if (d4 == 0 && on_seg(p1, p2, q2)) return true;
  return false;
}

inline bool contains(const OrientedRect& r, Vec2 p) {
  const Vec2 d = p - r.center;
  return std::abs(d.dot(r.axis_long())) <= r.length / 2.0 && std::abs(d.dot(r.axis_lat())) <= r.width / 2.0;
}

inline bool segment_intersects_rect(const Segment& s, const OrientedRect& r) {
  if (contains(r, s.a) || contains(r, s.b)) return true;
  const auto c = r.corners();
  for (int i = 0; i < 4; ++i)
    if (segments_intersect(s.a, s.b, c[i], c[(i + 1) % 4])) return true;
  return false;
}

}  // namespace vista
