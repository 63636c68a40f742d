#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "vista/error.hpp"
#include "vista/maneuver/compiler.hpp"
#include "vista/scenario/types.hpp"
#include "vista/trajectory/smoother.hpp"

namespace vista {

namespace detail {

// Piecewise-linear playback of explicit waypoints at constant per-leg speed.
// Leg durations are rounded up to whole steps so every waypoint is sampled.
inline TimedTrajectory interpolate_waypoints(const ActorSpec& spec, double dt) {
  std::vector<Vec2> pts;
  pts.reserve(spec.waypoints.size());
  for (const auto& w : spec.waypoints) pts.push_back(compose(spec.start_pose, Pose2{w.position.x, w.position.y, 0.0}).position());

  double heading = spec.start_pose.heading;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (distance(pts[i], pts[i + 1]) > 0.0) {
      const Vec2 d = pts[i + 1] - pts[i];
      heading = std::atan2(d.y, d.x);
      break;
    }
  }

  TimedTrajectory traj;
  traj.dt = dt;
  std::size_t step = 0;
  auto push = [&](Vec2 p, double h, double v) {
    traj.samples.push_back({static_cast<double>(step) * dt, Pose2{p.x, p.y, h}, v});
    ++step;
  };

  const auto& first = spec.waypoints.front();
  push(pts.front(), heading, first.hold > 0.0 || pts.size() == 1 ? 0.0 : first.speed);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& w = spec.waypoints[i];
    for (std::size_t h = detail::steps_for(w.hold, dt); h > 0; --h) push(pts[i], heading, 0.0);
    if (i + 1 == pts.size()) break;
    const Vec2 d = pts[i + 1] - pts[i];
    const double len = d.norm();
    if (len <= 0.0) continue;
    if (!(w.speed > 0.0)) throw InvalidParams("waypoint leg " + std::to_string(i) + " has zero speed");
    heading = std::atan2(d.y, d.x);
    const std::size_t n = std::max<std::size_t>(1, detail::steps_for(len / w.speed, dt));
    const double v = len / (static_cast<double>(n) * dt);
    for (std::size_t j = 1; j <= n; ++j) {
      const double f = static_cast<double>(j) / static_cast<double>(n);
      push(pts[i] + d * f, heading, v);
    }
  }
  return traj;
}

}  // namespace detail

/// Compiles an actor script into the trajectory it replays once triggered.
///
/// Maneuver scripts go through expand_l2 -> l1_to_keywaypoint ->
/// local_to_global(start_pose) -> smooth, with the start pose prepended as the
/// first key-waypoint. Waypoint scripts are interpolated linearly.
inline TimedTrajectory compile_actor(const ActorSpec& spec, double dt, const SmootherOptions& opt = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParams("compile_actor: dt must be > 0");
  if (spec.uses_waypoints()) return detail::interpolate_waypoints(spec, dt);
  if (spec.maneuvers.empty()) throw InvalidParams("actor '" + spec.actor_id + "' has an empty script");

  std::vector<ManeuverL1> l1s;
  for (const auto& m : spec.maneuvers) {
    auto part = expand_l2(m);
    l1s.insert(l1s.end(), part.begin(), part.end());
  }
  std::vector<KeyWaypoint> locals;
  locals.reserve(l1s.size());
  for (const auto& m : l1s) locals.push_back(l1_to_keywaypoint(m));

  std::vector<KeyWaypoint> kws;
  kws.reserve(locals.size() + 1);
  const double start_speed = spec.start_speed.value_or(l1s.front().kind == L1Kind::stop_hold ? 0.0 : l1s.front().speed);
  kws.push_back({spec.start_pose, start_speed, 0.0});
  for (const auto& kw : local_to_global(spec.start_pose, locals)) kws.push_back(kw);

  double cap = opt.v_floor;
  for (const auto& kw : kws) cap = std::max(cap, kw.speed);
  return smooth(kws, spec.speed_limit.value_or(cap), dt, opt);
}

}  // namespace vista
