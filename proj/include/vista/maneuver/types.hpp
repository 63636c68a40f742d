#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vista/error.hpp"
#include "vista/geometry/pose.hpp"
#include "vista/suite/param_value.hpp"

namespace vista {

enum class L1Kind { straight, turn, swerve_leg, stop_hold };

/// Atomic maneuver; maps to exactly one key-waypoint. Only the fields that
/// belong to `kind` are meaningful.
struct ManeuverL1 {
  L1Kind kind = L1Kind::straight;
  double length = 0.0;    // straight, swerve_leg [m]
  double lateral = 0.0;   // swerve_leg, signed, left positive [m]
  double radius = 0.0;    // turn [m]
  double angle = 0.0;     // turn, signed, left positive [rad]
  double speed = 0.0;     // target speed [m/s]
  double duration = 0.0;  // stop_hold [s]

  static ManeuverL1 straight(double length, double speed) {
    return {L1Kind::straight, length, 0.0, 0.0, 0.0, speed, 0.0};
  }
  static ManeuverL1 turn(double radius, double angle, double speed) {
    return {L1Kind::turn, 0.0, 0.0, radius, angle, speed, 0.0};
  }
  static ManeuverL1 swerve_leg(double length, double lateral, double speed) {
    return {L1Kind::swerve_leg, length, lateral, 0.0, 0.0, speed, 0.0};
  }
  static ManeuverL1 stop_hold(double duration) { return {L1Kind::stop_hold, 0.0, 0.0, 0.0, 0.0, 0.0, duration}; }

  friend bool operator==(const ManeuverL1&, const ManeuverL1&) = default;
};

enum class L2Kind {
  drive_straight,
  lane_change,
  swerve,
  cut_in,
  overtake,
  turn_left,
  turn_right,
  pull_over_stop,
  park_leg,
};

inline constexpr std::array<std::pair<L2Kind, std::string_view>, 9> kL2Names{{
    {L2Kind::drive_straight, "drive_straight"},
    {L2Kind::lane_change, "lane_change"},
    {L2Kind::swerve, "swerve"},
    {L2Kind::cut_in, "cut_in"},
    {L2Kind::overtake, "overtake"},
    {L2Kind::turn_left, "turn_left"},
    {L2Kind::turn_right, "turn_right"},
    {L2Kind::pull_over_stop, "pull_over_stop"},
    {L2Kind::park_leg, "park_leg"},
}};

inline std::string_view to_string(L2Kind k) {
  for (const auto& [kind, name] : kL2Names)
    if (kind == k) return name;
  throw UnsupportedManeuver("unknown L2 maneuver kind");
}

inline L2Kind l2_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kL2Names)
    if (name == s) return kind;
  throw UnsupportedManeuver("unsupported maneuver '" + std::string(s) + "'");
}

/// Composite maneuver. Parameters are keyed by name (see docs/maneuvers.md)
/// and may still be distributions in a suite template.
struct ManeuverL2 {
  L2Kind kind = L2Kind::drive_straight;
  std::map<std::string, ParamValue> params;

  friend bool operator==(const ManeuverL2&, const ManeuverL2&) = default;
};

/// Sparse node of a coarse trajectory. `pose` is local (relative to the
/// previous key-waypoint) or global depending on the pipeline stage.
struct KeyWaypoint {
  Pose2 pose;
  double speed = 0.0;
  double hold = 0.0;

  friend bool operator==(const KeyWaypoint&, const KeyWaypoint&) = default;
};

}  // namespace vista
