#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "vista/error.hpp"
#include "vista/geometry/pose.hpp"
#include "vista/maneuver/types.hpp"

namespace vista {

// L2 -> L1 expansion table. Mirrored in docs/maneuvers.md; keep both in sync.
//
//   drive_straight {length, speed}          straight(length)
//   lane_change    {length, lateral, speed} swerve_leg(length, +lateral)
//   swerve         {length, lateral, speed} swerve_leg(length/2, +lateral),
//                                           swerve_leg(length/2, -lateral)
//   cut_in         {advance, lateral, speed, merge_length=15, settle_length=10}
//                                           straight(advance),
//                                           swerve_leg(merge_length, -lateral),
//                                           straight(settle_length)
//   overtake       {lateral, pass_length, speed, change_length=15}
//                                           swerve_leg(change_length, +lateral),
//                                           straight(pass_length),
//                                           swerve_leg(change_length, -lateral)
//   turn_left      {radius, speed, angle=pi/2}  turn(radius, +angle)
//   turn_right     {radius, speed, angle=pi/2}  turn(radius, -angle)
//   pull_over_stop {length, lateral, speed, hold=0}
//                                           swerve_leg(length, -lateral),
//                                           stop_hold(hold)
//   park_leg       {length, radius, angle, speed, hold=0}
//                                           straight(length),
//                                           turn(radius, angle),
//                                           stop_hold(hold)   [only if hold > 0]
//
// Every L1 in an expansion carries the L2's `speed`.

namespace detail {

inline double param(const ManeuverL2& m, const std::string& key) {
  auto it = m.params.find(key);
  if (it == m.params.end())
    throw InvalidParams(std::string(to_string(m.kind)) + ": missing parameter '" + key + "'");
  if (!it->second.is_literal())
    throw InvalidParams(std::string(to_string(m.kind)) + ": parameter '" + key + "' is not concrete");
  return it->second.literal();
}

inline double param_or(const ManeuverL2& m, const std::string& key, double fallback) {
  return m.params.contains(key) ? param(m, key) : fallback;
}

}  // namespace detail

/// Throws InvalidParams when `m` breaks an L1 invariant.
inline void check_l1(const ManeuverL1& m) {
  auto fail = [](const std::string& what) { throw InvalidParams(what); };
  const double fields[] = {m.length, m.lateral, m.radius, m.angle, m.speed, m.duration};
  for (double f : fields)
    if (!std::isfinite(f)) fail("L1 maneuver parameters must be finite");
  switch (m.kind) {
    case L1Kind::straight:
    case L1Kind::swerve_leg:
      if (!(m.length > 0.0)) fail("L1 length must be > 0");
      if (m.speed < 0.0) fail("L1 target speed must be >= 0");
      break;
    case L1Kind::turn:
      if (!(m.radius > 0.0)) fail("L1 turn radius must be > 0");
      if (m.speed < 0.0) fail("L1 target speed must be >= 0");
      break;
    case L1Kind::stop_hold:
      if (m.duration < 0.0) fail("L1 stop_hold duration must be >= 0");
      break;
  }
}

inline std::vector<ManeuverL1> expand_l2(const ManeuverL2& m) {
  using detail::param;
  using detail::param_or;
  std::vector<ManeuverL1> out;
  switch (m.kind) {
    case L2Kind::drive_straight:
      out = {ManeuverL1::straight(param(m, "length"), param(m, "speed"))};
      break;
    case L2Kind::lane_change:
      out = {ManeuverL1::swerve_leg(param(m, "length"), param(m, "lateral"), param(m, "speed"))};
      break;
    case L2Kind::swerve: {
      const double half = param(m, "length") / 2.0;
      const double d = param(m, "lateral");
      const double v = param(m, "speed");
      out = {ManeuverL1::swerve_leg(half, d, v), ManeuverL1::swerve_leg(half, -d, v)};
      break;
    }
    case L2Kind::cut_in: {
      const double v = param(m, "speed");
      out = {ManeuverL1::straight(param(m, "advance"), v),
             ManeuverL1::swerve_leg(param_or(m, "merge_length", 15.0), -param(m, "lateral"), v),
             ManeuverL1::straight(param_or(m, "settle_length", 10.0), v)};
      break;
    }
    case L2Kind::overtake: {
      const double v = param(m, "speed");
      const double d = param(m, "lateral");
      const double change = param_or(m, "change_length", 15.0);
      out = {ManeuverL1::swerve_leg(change, d, v), ManeuverL1::straight(param(m, "pass_length"), v),
             ManeuverL1::swerve_leg(change, -d, v)};
      break;
    }
    case L2Kind::turn_left:
      out = {ManeuverL1::turn(param(m, "radius"), std::abs(param_or(m, "angle", kPi / 2.0)), param(m, "speed"))};
      break;
    case L2Kind::turn_right:
      out = {ManeuverL1::turn(param(m, "radius"), -std::abs(param_or(m, "angle", kPi / 2.0)), param(m, "speed"))};
      break;
    case L2Kind::pull_over_stop:
      out = {ManeuverL1::swerve_leg(param(m, "length"), -param(m, "lateral"), param(m, "speed")),
             ManeuverL1::stop_hold(param_or(m, "hold", 0.0))};
      break;
    case L2Kind::park_leg: {
      const double v = param(m, "speed");
      out = {ManeuverL1::straight(param(m, "length"), v),
             ManeuverL1::turn(param(m, "radius"), param(m, "angle"), v)};
      const double hold = param_or(m, "hold", 0.0);
      if (hold != 0.0) out.push_back(ManeuverL1::stop_hold(hold));
      break;
    }
    default:
      throw UnsupportedManeuver("unsupported L2 maneuver kind " + std::to_string(static_cast<int>(m.kind)));
  }
  for (const auto& l1 : out) check_l1(l1);
  return out;
}

/// Local key-waypoint for one atomic maneuver, relative to the pose it starts from.
inline KeyWaypoint l1_to_keywaypoint(const ManeuverL1& m) {
  check_l1(m);
  switch (m.kind) {
    case L1Kind::straight:
      return {Pose2{m.length, 0.0, 0.0}, m.speed, 0.0};
    case L1Kind::swerve_leg:
      return {Pose2{m.length, m.lateral, 0.0}, m.speed, 0.0};
    case L1Kind::turn: {
      // Constant-radius arc; the center sits on the side of the turn.
      const double a = std::abs(m.angle);
      const double side = m.angle >= 0.0 ? 1.0 : -1.0;
      return {Pose2{m.radius * std::sin(a), side * m.radius * (1.0 - std::cos(a)), m.angle}, m.speed, 0.0};
    }
    case L1Kind::stop_hold:
      return {Pose2{0.0, 0.0, 0.0}, 0.0, m.duration};
  }
  throw UnsupportedManeuver("unknown L1 maneuver kind");
}

/// Chains local key-waypoints from `start`: each pose is read in the frame of
/// the previously accumulated global pose.
inline std::vector<KeyWaypoint> local_to_global(const Pose2& start, const std::vector<KeyWaypoint>& locals) {
  std::vector<KeyWaypoint> out;
  out.reserve(locals.size());
  Pose2 frame = start;
  for (const auto& kw : locals) {
    frame = compose(frame, kw.pose);
    out.push_back({frame, kw.speed, kw.hold});
  }
  return out;
}

}  // namespace vista
