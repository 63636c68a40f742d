#pragma once

#include <array>
#include <cmath>

#include "vista/error.hpp"
#include "vista/geometry/pose.hpp"

namespace vista {

/// Position, velocity and acceleration of one end of a segment.
struct BoundaryState {
  Vec2 position;
  Vec2 velocity;
  Vec2 acceleration;
};

/// Per-axis degree-5 polynomial p(t) = sum c[k] t^k on [0, duration].
struct QuinticSegment {
  std::array<double, 6> coeffs_x{};
  std::array<double, 6> coeffs_y{};
  double duration = 0.0;

  static double eval(const std::array<double, 6>& c, double t) {
    return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
  }
  static double eval_d1(const std::array<double, 6>& c, double t) {
    return c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])));
  }
  static double eval_d2(const std::array<double, 6>& c, double t) {
    return 2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]));
  }

  Vec2 position(double t) const { return {eval(coeffs_x, t), eval(coeffs_y, t)}; }
  Vec2 velocity(double t) const { return {eval_d1(coeffs_x, t), eval_d1(coeffs_y, t)}; }
  Vec2 acceleration(double t) const { return {eval_d2(coeffs_x, t), eval_d2(coeffs_y, t)}; }
};

namespace detail {

// Closed form of the 6x6 boundary system for one axis.
inline std::array<double, 6> quintic_axis(double p0, double v0, double a0, double p1, double v1, double a1,
                                          double T) {
  const double T2 = T * T;
  const double T3 = T2 * T;
  const double dp = p1 - p0;
  std::array<double, 6> c{};
  c[0] = p0;
  c[1] = v0;
  c[2] = a0 / 2.0;
  c[3] = (20.0 * dp - (8.0 * v1 + 12.0 * v0) * T - (3.0 * a0 - a1) * T2) / (2.0 * T3);
  c[4] = (-30.0 * dp + (14.0 * v1 + 16.0 * v0) * T + (3.0 * a0 - 2.0 * a1) * T2) / (2.0 * T3 * T);
  c[5] = (12.0 * dp - 6.0 * (v1 + v0) * T - (a0 - a1) * T2) / (2.0 * T3 * T2);
  return c;
}

inline bool finite(const BoundaryState& s) {
  return std::isfinite(s.position.x) && std::isfinite(s.position.y) && std::isfinite(s.velocity.x) &&
         std::isfinite(s.velocity.y) && std::isfinite(s.acceleration.x) && std::isfinite(s.acceleration.y);
}

}  // namespace detail

inline QuinticSegment solve_quintic_segment(const BoundaryState& start, const BoundaryState& end, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw SingularSystem("quintic segment duration must be finite and > 0");
  if (!detail::finite(start) || !detail::finite(end))
    throw SingularSystem("quintic boundary conditions must be finite");
  QuinticSegment seg;
  seg.duration = duration;
  seg.coeffs_x = detail::quintic_axis(start.position.x, start.velocity.x, start.acceleration.x, end.position.x,
                                      end.velocity.x, end.acceleration.x, duration);
  seg.coeffs_y = detail::quintic_axis(start.position.y, start.velocity.y, start.acceleration.y, end.position.y,
                                      end.velocity.y, end.acceleration.y, duration);
  return seg;
}

}  // namespace vista
