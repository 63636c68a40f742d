#pragma once

#include <cmath>
#include <numbers>

namespace vista {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into (-pi, pi]. -pi maps to +pi.
inline double normalize_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Signed smallest difference a - b, in (-pi, pi].
inline double angle_diff(double a, double b) { return normalize_angle(a - b); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;

  double norm() const { return std::hypot(x, y); }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
};

inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 heading_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Planar pose in the global frame: meters and radians.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Pose2() = default;
  Pose2(double x_, double y_, double heading_) : x(x_), y(y_), heading(normalize_angle(heading_)) {}

  Vec2 position() const { return {x, y}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(heading); }
  friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// Rigid-body composition: `local` expressed in the frame of `base`.
inline Pose2 compose(const Pose2& base, const Pose2& local) {
  const Vec2 p = base.position() + rotate(local.position(), base.heading);
  return {p.x, p.y, base.heading + local.heading};
}

/// Inverse of compose: expresses `global` in the frame of `base`.
inline Pose2 relative_to(const Pose2& base, const Pose2& global) {
  const Vec2 p = rotate(global.position() - base.position(), -base.heading);
  return {p.x, p.y, global.heading - base.heading};
}

struct BodyGeometry {
  double length = 4.5;
  double width = 1.9;
  friend bool operator==(const BodyGeometry&, const BodyGeometry&) = default;
};

struct Segment {
  Vec2 a;
  Vec2 b;
  friend bool operator==(const Segment&, const Segment&) = default;
};

}  // namespace vista
