#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "vista/error.hpp"
#include "vista/geometry/pose.hpp"
#include "vista/maneuver/types.hpp"
#include "vista/trajectory/quintic.hpp"

namespace vista {

struct TrajectorySample {
  double t = 0.0;
  Pose2 pose;
  double speed = 0.0;
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

/// Dense, uniformly sampled trajectory an actor replays verbatim.
struct TimedTrajectory {
  double dt = 0.1;
  std::vector<TrajectorySample> samples;
  // Motion pieces in order, for diagnostics; dwells are not listed.
  std::vector<QuinticSegment> segments;

  bool empty() const { return samples.empty(); }
  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }

  /// Sample `step`, holding the last one past the end.
  const TrajectorySample& at_step(std::size_t step) const {
    return samples[std::min(step, samples.size() - 1)];
  }
};

struct SmootherOptions {
  // Floor on the mean segment speed used to size segment durations.
  double v_floor = 0.5;
  // Waypoints closer than this are merged into one.
  double merge_distance = 1e-6;
  int max_stretch_iterations = 60;
};

namespace detail {

inline std::size_t steps_for(double seconds, double dt) {
  if (seconds <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(seconds / dt - 1e-9));
}

inline double peak_speed(const QuinticSegment& seg, std::size_t steps, double dt) {
  double peak = 0.0;
  constexpr int kSub = 4;
  for (std::size_t j = 0; j <= steps * kSub; ++j) {
    const double t = static_cast<double>(j) * dt / kSub;
    peak = std::max(peak, seg.velocity(t).norm());
  }
  return peak;
}

// Coincident neighbours collapse into one waypoint taking the later speed and
// heading and the summed hold. A hold forces zero speed.
inline std::vector<KeyWaypoint> merge_waypoints(const std::vector<KeyWaypoint>& in, double eps) {
  std::vector<KeyWaypoint> out;
  for (const auto& kw : in) {
    if (!out.empty() && distance(out.back().pose.position(), kw.pose.position()) < eps) {
      KeyWaypoint& prev = out.back();
      prev.pose = Pose2{prev.pose.x, prev.pose.y, kw.pose.heading};
      prev.speed = kw.speed;
      prev.hold += kw.hold;
    } else {
      out.push_back(kw);
    }
  }
  for (auto& kw : out)
    if (kw.hold > 0.0) kw.speed = 0.0;
  return out;
}

}  // namespace detail

/// Refines global key-waypoints into a timed trajectory: one quintic per
/// consecutive pair, zero boundary accelerations, boundary velocities along
/// the waypoint headings with magnitude min(speed, speed_limit). Segment
/// durations are chord / max(mean boundary speed, v_floor), rounded up to a
/// whole number of steps so that every key-waypoint lands on a sample. If a
/// segment's interior speed exceeds the limit, its duration is stretched until
/// it does not.
inline TimedTrajectory smooth(const std::vector<KeyWaypoint>& keywaypoints, double speed_limit, double dt,
                              const SmootherOptions& opt = {}) {
  if (keywaypoints.size() < 2) throw InvalidParams("smooth: need at least two key-waypoints");
  if (!(speed_limit > 0.0) || std::isnan(speed_limit)) throw InvalidParams("smooth: speed_limit must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParams("smooth: dt must be finite and > 0");
  for (const auto& kw : keywaypoints) {
    if (!kw.pose.finite()) throw InvalidParams("smooth: key-waypoint pose must be finite");
    if (!(kw.speed >= 0.0) || !std::isfinite(kw.speed)) throw InvalidParams("smooth: speed must be finite, >= 0");
    if (!(kw.hold >= 0.0) || !std::isfinite(kw.hold)) throw InvalidParams("smooth: hold must be finite, >= 0");
  }

  const std::vector<KeyWaypoint> wps = detail::merge_waypoints(keywaypoints, opt.merge_distance);
  auto clamped = [&](const KeyWaypoint& kw) { return std::min(kw.speed, speed_limit); };

  TimedTrajectory traj;
  traj.dt = dt;
  std::size_t step = 0;
  auto push = [&](const Pose2& pose, double speed) {
    traj.samples.push_back({static_cast<double>(step) * dt, pose, std::min(speed, speed_limit)});
    ++step;
  };

  push(wps.front().pose, clamped(wps.front()));
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const KeyWaypoint& from = wps[i];
    const Pose2 at = traj.samples.back().pose;
    for (std::size_t h = detail::steps_for(from.hold, dt); h > 0; --h) push(at, 0.0);
    if (i + 1 == wps.size()) break;

    const KeyWaypoint& to = wps[i + 1];
    const double v0 = clamped(from);
    const double v1 = clamped(to);
    const BoundaryState s0{from.pose.position(), heading_vector(from.pose.heading) * v0, {}};
    const BoundaryState s1{to.pose.position(), heading_vector(to.pose.heading) * v1, {}};
    const double chord = distance(s0.position, s1.position);
    const double mean_speed = std::max((v0 + v1) / 2.0, opt.v_floor);

    std::size_t n = std::max<std::size_t>(1, detail::steps_for(chord / mean_speed, dt));
    QuinticSegment seg = solve_quintic_segment(s0, s1, static_cast<double>(n) * dt);
    for (int it = 0; it < opt.max_stretch_iterations; ++it) {
      const double peak = detail::peak_speed(seg, n, dt);
      if (peak <= speed_limit * (1.0 + 1e-9)) break;  // tolerance keeps this frame-independent
      const double ratio = std::min(peak / speed_limit, 2.0);
      n = std::max(n + 1, static_cast<std::size_t>(std::ceil(static_cast<double>(n) * ratio)));
      seg = solve_quintic_segment(s0, s1, static_cast<double>(n) * dt);
    }

    double heading = at.heading;
    for (std::size_t j = 1; j <= n; ++j) {
      const double t = static_cast<double>(j) * dt;
      const Vec2 p = seg.position(t);
      const Vec2 v = seg.velocity(t);
      const double speed = v.norm();
      if (speed > 1e-9) heading = std::atan2(v.y, v.x);
      push(Pose2{p.x, p.y, heading}, speed);
    }
    traj.segments.push_back(seg);
  }
  return traj;
}

}  // namespace vista
