#pragma once

// Brute-force references used to pin geometry and TTC results. They share no
// code with the library's separating-axis / analytic implementations.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vista/geometry/rect.hpp"

namespace oracle {

using vista::OrientedRect;
using vista::Vec2;

struct Box {
  double cx, cy, h, hl, hw;  // center, heading, half-length, half-width
};

inline Box box_of(const OrientedRect& r, double grow = 0.0) {
  return {r.center.x, r.center.y, r.heading, r.length / 2.0 + grow, r.width / 2.0 + grow};
}

inline bool inside(const Box& b, double x, double y) {
  const double dx = x - b.cx, dy = y - b.cy;
  const double c = std::cos(b.h), s = std::sin(b.h);
  return std::abs(dx * c + dy * s) <= b.hl && std::abs(-dx * s + dy * c) <= b.hw;
}

inline std::array<double, 4> bbox(const Box& b) {
  const double c = std::abs(std::cos(b.h)), s = std::abs(std::sin(b.h));
  const double ex = b.hl * c + b.hw * s, ey = b.hl * s + b.hw * c;
  return {b.cx - ex, b.cx + ex, b.cy - ey, b.cy + ey};
}

/// Overlap by sampling a 1 cm grid over the common bounding box.
inline bool raster_overlap(const Box& a, const Box& b, double cell = 0.01) {
  const auto ba = bbox(a), bb = bbox(b);
  const double x0 = std::max(ba[0], bb[0]), x1 = std::min(ba[1], bb[1]);
  const double y0 = std::max(ba[2], bb[2]), y1 = std::min(ba[3], bb[3]);
  if (x0 > x1 || y0 > y1) return false;
  const double gx0 = std::floor(x0 / cell) * cell, gy0 = std::floor(y0 / cell) * cell;
  for (double x = gx0; x <= x1 + cell; x += cell)
    for (double y = gy0; y <= y1 + cell; y += cell)
      if (inside(a, x, y) && inside(b, x, y)) return true;
  return false;
}

inline bool raster_overlap(const OrientedRect& a, const OrientedRect& b, double grow = 0.0) {
  return raster_overlap(box_of(a, grow), box_of(b, grow));
}

inline std::array<Vec2, 4> corners(const Box& b) {
  const double c = std::cos(b.h), s = std::sin(b.h);
  std::array<Vec2, 4> out;
  const double sx[] = {1, -1, -1, 1}, sy[] = {1, 1, -1, -1};
  for (int i = 0; i < 4; ++i)
    out[i] = {b.cx + sx[i] * b.hl * c - sy[i] * b.hw * s, b.cy + sx[i] * b.hl * s + sy[i] * b.hw * c};
  return out;
}

inline double seg_dist(double px, double py, Vec2 a, Vec2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  double t = ((px - a.x) * vx + (py - a.y) * vy) / (vx * vx + vy * vy);
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a.x + t * vx), py - (a.y + t * vy));
}

/// Gap between two disjoint boxes: each perimeter sampled every `step`
/// metres against the other's edges. Error is at most step / 2.
inline double sampled_distance(const OrientedRect& ra, const OrientedRect& rb, double step = 0.01) {
  double best = std::numeric_limits<double>::infinity();
  auto sweep = [&](const Box& p, const Box& q) {
    const auto cp = corners(p), cq = corners(q);
    for (int e = 0; e < 4; ++e) {
      const Vec2 a = cp[e], b = cp[(e + 1) % 4];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int k = 0; k <= n; ++k) {
        const double f = static_cast<double>(k) / n;
        const double x = a.x + f * (b.x - a.x), y = a.y + f * (b.y - a.y);
        for (int j = 0; j < 4; ++j) best = std::min(best, seg_dist(x, y, cq[j], cq[(j + 1) % 4]));
      }
    }
  };
  sweep(box_of(ra), box_of(rb));
  sweep(box_of(rb), box_of(ra));
  return best;
}

// Convex polygon intersection by edge crossings and vertex containment.
inline bool polygons_intersect(const Box& a, const Box& b) {
  const auto ca = corners(a), cb = corners(b);
  auto cross = [](Vec2 o, Vec2 p, Vec2 q) { return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x); };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Vec2 p1 = ca[i], p2 = ca[(i + 1) % 4], q1 = cb[j], q2 = cb[(j + 1) % 4];
      const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2), d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
      if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return true;
    }
  return inside(a, cb[0].x, cb[0].y) || inside(b, ca[0].x, ca[0].y);
}

/// First contact time of two boxes in uniform motion, 1 ms resolution.
inline double fine_ttc(const OrientedRect& a, Vec2 va, const OrientedRect& b, Vec2 vb, double horizon = 20.0,
                       double step = 0.001) {
  const long n = std::lround(horizon / step);
  for (long k = 0; k <= n; ++k) {
    const double t = k * step;
    Box pa = box_of(a), pb = box_of(b);
    pa.cx += va.x * t;
    pa.cy += va.y * t;
    pb.cx += vb.x * t;
    pb.cy += vb.y * t;
    if (polygons_intersect(pa, pb)) return t;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace oracle
