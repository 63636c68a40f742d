#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vista/error.hpp"
#include "vista/eval/log.hpp"
#include "vista/maneuver/compile_actor.hpp"
#include "vista/scenario/types.hpp"
#include "vista/sim/policy.hpp"

namespace vista {

// Simulator defaults. None of these come from a reference stack; they are
// chosen for an urban passenger car at desk scale.
struct SimConfig {
  double dt = 0.1;       // fixed step [s]
  double a_max = 3.0;    // ego |dv/dt| bound [m/s^2]
  double r_goal = 3.0;   // destination reached radius [m]
};

/// Scenario plus compiled actor trajectories; shared, immutable, per run.
struct CompiledScenario {
  Scenario scenario;
  std::vector<TimedTrajectory> trajectories;  // parallel to scenario.actors
  double dt = 0.1;

  static std::shared_ptr<const CompiledScenario> compile(const Scenario& s, double dt) {
    auto c = std::make_shared<CompiledScenario>();
    c->scenario = s;
    c->dt = dt;
    for (const auto& a : s.actors) c->trajectories.push_back(compile_actor(a, dt));
    return c;
  }
};

struct ActorRuntime {
  EntityState state;
  bool active = false;
  std::size_t playback_step = 0;
  std::optional<std::size_t> activated_at_step;
  friend bool operator==(const ActorRuntime&, const ActorRuntime&) = default;
};

struct WorldState {
  std::shared_ptr<const CompiledScenario> compiled;
  std::size_t step_count = 0;
  EntityState ego;
  Vec2 ego_prev_position;  // for line-crossing triggers
  std::vector<ActorRuntime> actors;
  std::vector<LightState> light_states;
  std::optional<std::size_t> active_weather;  // index into weather_windows

  double sim_time() const { return static_cast<double>(step_count) * compiled->dt; }
  const Scenario& scenario() const { return compiled->scenario; }
};

inline WorldState initial_state(std::shared_ptr<const CompiledScenario> compiled) {
  WorldState w;
  w.compiled = std::move(compiled);
  const Scenario& s = w.scenario();
  w.ego = {s.ego_start, 0.0, s.ego_body};
  w.ego_prev_position = s.ego_start.position();
  for (const auto& a : s.actors) w.actors.push_back({{a.start_pose, 0.0, a.body}, false, 0, std::nullopt});
  for (const auto& l : s.traffic_lights) w.light_states.push_back(light_state_at(l, 0.0));
  for (std::size_t i = 0; i < s.weather_windows.size(); ++i)
    if (weather_at(s.weather_windows, 0.0) == &s.weather_windows[i]) w.active_weather = i;
  return w;
}

inline Observation observe(const WorldState& w) {
  const Scenario& s = w.scenario();
  Observation obs;
  obs.sim_time = w.sim_time();
  obs.dt = w.compiled->dt;
  obs.ego = w.ego;
  obs.destination = s.ego_destination;
  obs.road_speed_limit = s.road_speed_limit;
  for (std::size_t i = 0; i < s.actors.size(); ++i)
    obs.others.push_back({s.actors[i].actor_id, EntityType::actor, w.actors[i].state});
  for (const auto& o : s.static_objects)
    obs.others.push_back({o.object_id, EntityType::static_object, {o.pose, 0.0, o.body}});
  for (std::size_t i = 0; i < s.traffic_lights.size(); ++i)
    obs.lights.push_back({s.traffic_lights[i].light_id, s.traffic_lights[i].stop_line, w.light_states[i]});
  return obs;
}

namespace detail {

inline bool trigger_fires(const Trigger& t, const WorldState& w, const EntityState& actor) {
  switch (t.kind) {
    case TriggerKind::immediate:
      return true;
    case TriggerKind::at_time:
      return w.sim_time() >= t.time.literal() - 1e-9;
    case TriggerKind::ego_within_radius:
      return distance(w.ego.pose.position(), actor.pose.position()) <= t.radius.literal();
    case TriggerKind::ego_crosses_line:
      return w.ego_prev_position != w.ego.pose.position() &&
             segments_intersect(w.ego_prev_position, w.ego.pose.position(), t.line.a, t.line.b);
  }
  return false;
}

}  // namespace detail

/// One fixed step: triggers, actor playback, lights, weather, then the ego
/// policy and unicycle integration. Policy failures surface as PolicyError.
inline WorldState step(const WorldState& current, EgoPolicy& policy, const SimConfig& cfg = {}) {
  const Scenario& s = current.scenario();
  const double dt = current.compiled->dt;
  WorldState next = current;
  next.step_count = current.step_count + 1;
  const double t_next = next.sim_time();

  // (1) triggers, evaluated against the pre-step ego state
  for (std::size_t i = 0; i < s.actors.size(); ++i) {
    ActorRuntime& a = next.actors[i];
    if (!a.active && detail::trigger_fires(s.actors[i].trigger, current, current.actors[i].state)) {
      a.active = true;
      a.activated_at_step = next.step_count;
    }
  }
  // (2) playback; the last sample is held with zero speed
  for (std::size_t i = 0; i < s.actors.size(); ++i) {
    ActorRuntime& a = next.actors[i];
    if (!a.active) continue;
    const TimedTrajectory& traj = current.compiled->trajectories[i];
    a.playback_step += 1;
    const TrajectorySample& smp = traj.at_step(a.playback_step);
    a.state.pose = smp.pose;
    a.state.speed = a.playback_step < traj.samples.size() ? smp.speed : 0.0;
  }
  // (3) lights
  for (std::size_t i = 0; i < s.traffic_lights.size(); ++i) next.light_states[i] = light_state_at(s.traffic_lights[i], t_next);
  // (4) weather (metadata only)
  next.active_weather.reset();
  if (const WeatherWindow* w = weather_at(s.weather_windows, t_next))
    next.active_weather = static_cast<std::size_t>(w - s.weather_windows.data());

  // (5) ego
  Command cmd;
  try {
    cmd = policy.decide(observe(next));
  } catch (const std::exception& e) {
    throw PolicyError(policy.name() + " failed: " + e.what());
  }
  if (!std::isfinite(cmd.target_speed) || !std::isfinite(cmd.curvature))
    throw PolicyError(policy.name() + " returned a non-finite command");

  EntityState& ego = next.ego;
  const double target = std::max(0.0, cmd.target_speed);
  const double dv = std::clamp(target - ego.speed, -cfg.a_max * dt, cfg.a_max * dt);
  const double v = std::max(0.0, ego.speed + dv);
  const double heading = ego.pose.heading + cmd.curvature * v * dt;
  const Vec2 p = ego.pose.position() + heading_vector(heading) * (v * dt);
  next.ego_prev_position = ego.pose.position();
  ego.pose = Pose2{p.x, p.y, heading};
  ego.speed = v;
  return next;
}

/// Appends one row per entity (ego, actors, static objects) for the current timestep.
inline void append_log_rows(const WorldState& w, SimLog& log) {
  const Scenario& s = w.scenario();
  const double t = w.sim_time();
  auto row = [&](const std::string& id, EntityType type, const EntityState& e) {
    log.push_back({t, id, type, e.pose.x, e.pose.y, e.pose.heading, e.speed, e.body.length, e.body.width});
  };
  row("ego", EntityType::ego, w.ego);
  for (std::size_t i = 0; i < s.actors.size(); ++i) row(s.actors[i].actor_id, EntityType::actor, w.actors[i].state);
  for (const auto& o : s.static_objects) row(o.object_id, EntityType::static_object, {o.pose, 0.0, o.body});
}

enum class Completion { reached_destination, timed_out };

inline std::string_view to_string(Completion c) {
  return c == Completion::reached_destination ? "reached_destination" : "timed_out";
}

struct RunResult {
  SimLog log;  // row 0 of each entity is the initial state at t = 0
  Completion completion = Completion::timed_out;
  std::optional<double> completion_time;
  std::size_t steps = 0;  // fixed steps executed; rows per entity = steps + 1
  std::string error;      // set when the policy failed
  double dt = 0.1;
};

/// Runs until the ego center is within r_goal of the destination or the
/// time budget (ceil(time_limit / dt) steps) is spent.
inline RunResult run_scenario(const Scenario& s, EgoPolicy& policy, const SimConfig& cfg = {}) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidParams("run_scenario: dt must be > 0");
  WorldState w = initial_state(CompiledScenario::compile(s, cfg.dt));
  RunResult r;
  r.dt = cfg.dt;
  append_log_rows(w, r.log);
  const auto max_steps = static_cast<std::size_t>(std::ceil(s.time_limit / cfg.dt - 1e-9));
  auto at_goal = [&](const WorldState& ws) {
    return distance(ws.ego.pose.position(), s.ego_destination) <= cfg.r_goal;
  };
  if (at_goal(w)) {
    r.completion = Completion::reached_destination;
    r.completion_time = 0.0;
    return r;
  }
  while (w.step_count < max_steps) {
    try {
      w = step(w, policy, cfg);
    } catch (const PolicyError& e) {
      r.error = e.what();
      r.completion = Completion::timed_out;
      break;
    }
    append_log_rows(w, r.log);
    r.steps = w.step_count;
    if (at_goal(w)) {
      r.completion = Completion::reached_destination;
      r.completion_time = w.sim_time();
      break;
    }
  }
  return r;
}

/// Run metadata document written next to the log.
inline nlohmann::json run_metadata(const RunResult& r, const Scenario& s, const std::string& policy,
                                   std::optional<std::uint64_t> seed = std::nullopt) {
  nlohmann::json j{{"scenario_id", s.scenario_id},
                   {"category", enum_name(kCategoryNames, s.category)},
                   {"policy", policy},
                   {"dt", r.dt},
                   {"steps", r.steps},
                   {"completion", to_string(r.completion)},
                   {"completion_time", nullptr},
                   {"seed", nullptr},
                   {"error", r.error}};
  if (r.completion_time) j["completion_time"] = *r.completion_time;
  if (seed) j["seed"] = *seed;
  return j;
}

}  // namespace vista
