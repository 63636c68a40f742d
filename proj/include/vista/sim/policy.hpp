#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "vista/error.hpp"
#include "vista/eval/log.hpp"
#include "vista/geometry/rect.hpp"
#include "vista/scenario/types.hpp"

namespace vista {

struct EntityState {
  Pose2 pose;
  double speed = 0.0;
  BodyGeometry body;

  OrientedRect rect() const { return OrientedRect::from(pose, body); }
  friend bool operator==(const EntityState&, const EntityState&) = default;
};

struct ObservedEntity {
  std::string id;
  EntityType type = EntityType::actor;
  EntityState state;
};

struct ObservedLight {
  std::string id;
  Segment stop_line;
  LightState state = LightState::green;
};

/// What the ego policy sees each step: ground truth, no sensor model.
struct Observation {
  double sim_time = 0.0;
  double dt = 0.1;
  EntityState ego;
  std::vector<ObservedEntity> others;
  std::vector<ObservedLight> lights;
  Vec2 destination;
  double road_speed_limit = kDefaultRoadSpeedLimit;
};

struct Command {
  double target_speed = 0.0;  // m/s
  double curvature = 0.0;     // 1/m, left positive
};

/// Stand-in for the driving stack under test.
class EgoPolicy {
 public:
  virtual ~EgoPolicy() = default;
  virtual std::string name() const = 0;
  virtual Command decide(const Observation& obs) = 0;
};

struct FollowerConfig {
  double v_cruise = 10.0;
  double max_curvature = 0.25;
  double a_max = 3.0;           // must match the simulator's ego a_max
  double standstill_gap = 2.0;  // corridor length at rest [m]
  double lateral_margin = 0.5;  // corridor half-width beyond the body [m]
};

/// Drives a straight line toward the destination at min(road limit, v_cruise),
/// steering with pure pursuit on the destination point. Ignores everything else.
class WaypointFollower : public EgoPolicy {
 public:
  explicit WaypointFollower(FollowerConfig cfg = {}) : cfg_(cfg) {}

  std::string name() const override { return "waypoint_follower"; }

  Command decide(const Observation& obs) override {
    return {std::min(obs.road_speed_limit, cfg_.v_cruise), steer(obs)};
  }

 protected:
  double steer(const Observation& obs) const {
    const Vec2 to_goal = obs.destination - obs.ego.pose.position();
    const double dist = to_goal.norm();
    if (dist < 1e-9) return 0.0;
    const double alpha = angle_diff(std::atan2(to_goal.y, to_goal.x), obs.ego.pose.heading);
    const double k = 2.0 * std::sin(alpha) / std::max(dist, 1.0);
    return std::clamp(k, -cfg_.max_curvature, cfg_.max_curvature);
  }

  FollowerConfig cfg_;
};

/// WaypointFollower plus a forward-corridor rule: commands a stop whenever an
/// entity, or the stop line of a red/yellow light, lies in the rectangle ahead
/// of the front bumper whose length is the stopping distance at a_max plus two
/// steps of travel plus the standstill gap, and whose width is the ego width
/// plus twice the lateral margin.
class BrakingFollower : public WaypointFollower {
 public:
  explicit BrakingFollower(FollowerConfig cfg = {}) : WaypointFollower(cfg) {}

  std::string name() const override { return "braking_follower"; }

  OrientedRect corridor(const Observation& obs) const {
    const EntityState& ego = obs.ego;
    const double v = ego.speed;
    const double len = v * v / (2.0 * cfg_.a_max) + 2.0 * v * obs.dt + cfg_.standstill_gap;
    const Vec2 fwd = heading_vector(ego.pose.heading);
    const Vec2 center = ego.pose.position() + fwd * (ego.body.length / 2.0 + len / 2.0);
    return {center, ego.pose.heading, len, ego.body.width + 2.0 * cfg_.lateral_margin};
  }

  bool must_stop(const Observation& obs) const {
    const OrientedRect c = corridor(obs);
    for (const auto& o : obs.others)
      if (overlaps(c, o.state.rect())) return true;
    for (const auto& l : obs.lights)
      if (l.state != LightState::green && segment_intersects_rect(l.stop_line, c)) return true;
    return false;
  }

  Command decide(const Observation& obs) override {
    Command cmd = WaypointFollower::decide(obs);
    if (must_stop(obs)) cmd.target_speed = 0.0;
    return cmd;
  }
};

inline std::vector<std::string> builtin_policies() { return {"waypoint_follower", "braking_follower"}; }

inline std::unique_ptr<EgoPolicy> make_policy(const std::string& name, FollowerConfig cfg = {}) {
  if (name == "waypoint_follower") return std::make_unique<WaypointFollower>(cfg);
  if (name == "braking_follower") return std::make_unique<BrakingFollower>(cfg);
  throw InvalidParams("unknown policy '" + name + "'");
}

}  // namespace vista
