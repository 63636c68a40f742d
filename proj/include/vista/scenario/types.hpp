#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vista/error.hpp"
#include "vista/geometry/pose.hpp"
#include "vista/maneuver/types.hpp"
#include "vista/suite/param_value.hpp"

namespace vista {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kDefaultRoadSpeedLimit = 13.9;  // ~50 km/h
inline constexpr BodyGeometry kDefaultEgoBody{4.7, 2.0};

template <typename E, std::size_t N>
using EnumNames = std::array<std::pair<E, std::string_view>, N>;

template <typename E, std::size_t N>
std::string_view enum_name(const EnumNames<E, N>& names, E v) {
  for (const auto& [e, n] : names)
    if (e == v) return n;
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> enum_from(const EnumNames<E, N>& names, std::string_view s) {
  for (const auto& [e, n] : names)
    if (n == s) return e;
  return std::nullopt;
}

enum class Category { basic_functional, negative, environmental, odd_coverage, regression };
inline constexpr EnumNames<Category, 5> kCategoryNames{{{Category::basic_functional, "basic_functional"},
                                                        {Category::negative, "negative"},
                                                        {Category::environmental, "environmental"},
                                                        {Category::odd_coverage, "odd_coverage"},
                                                        {Category::regression, "regression"}}};

enum class ActorKind { pedestrian, car, truck, bus, motorbike, cyclist, emergency };
inline constexpr EnumNames<ActorKind, 7> kActorKindNames{{{ActorKind::pedestrian, "pedestrian"},
                                                          {ActorKind::car, "car"},
                                                          {ActorKind::truck, "truck"},
                                                          {ActorKind::bus, "bus"},
                                                          {ActorKind::motorbike, "motorbike"},
                                                          {ActorKind::cyclist, "cyclist"},
                                                          {ActorKind::emergency, "emergency"}}};

enum class TriggerKind { immediate, at_time, ego_within_radius, ego_crosses_line };
inline constexpr EnumNames<TriggerKind, 4> kTriggerKindNames{{{TriggerKind::immediate, "immediate"},
                                                              {TriggerKind::at_time, "at_time"},
                                                              {TriggerKind::ego_within_radius, "ego_within_radius"},
                                                              {TriggerKind::ego_crosses_line, "ego_crosses_line"}}};

enum class LightState { red, yellow, green };
inline constexpr EnumNames<LightState, 3> kLightStateNames{
    {{LightState::red, "red"}, {LightState::yellow, "yellow"}, {LightState::green, "green"}}};

enum class StaticKind { cone, barrier, parked_prop };
inline constexpr EnumNames<StaticKind, 3> kStaticKindNames{
    {{StaticKind::cone, "cone"}, {StaticKind::barrier, "barrier"}, {StaticKind::parked_prop, "parked_prop"}}};

/// Activation condition of an actor. `time` is used by at_time, `radius` by
/// ego_within_radius, `line` by ego_crosses_line.
struct Trigger {
  TriggerKind kind = TriggerKind::immediate;
  ParamValue time = 0.0;
  ParamValue radius = 0.0;
  Segment line;
  friend bool operator==(const Trigger&, const Trigger&) = default;
};

/// Explicit waypoint for pedestrian-style scripts, in the actor's start-pose
/// frame. `speed` is the speed on the leg leaving this waypoint.
struct ScriptWaypoint {
  Vec2 position;
  double speed = 0.0;
  double hold = 0.0;
  friend bool operator==(const ScriptWaypoint&, const ScriptWaypoint&) = default;
};

struct ActorSpec {
  std::string actor_id;
  ActorKind kind = ActorKind::car;
  BodyGeometry body;
  Pose2 start_pose;
  Trigger trigger;
  // Exactly one of the two scripts is used: waypoints when non-empty.
  std::vector<ScriptWaypoint> waypoints;
  std::vector<ManeuverL2> maneuvers;
  // Smoother cap; defaults to the highest commanded speed in the script.
  std::optional<double> speed_limit;
  // Speed at the start pose; defaults to the first leg's target speed.
  std::optional<double> start_speed;

  bool uses_waypoints() const { return !waypoints.empty(); }
  friend bool operator==(const ActorSpec&, const ActorSpec&) = default;
};

struct WeatherWindow {
  double start = 0.0;
  double end = 0.0;
  std::map<std::string, double> params;
  friend bool operator==(const WeatherWindow&, const WeatherWindow&) = default;
};

struct LightPhase {
  LightState state = LightState::green;
  double duration = 0.0;
  friend bool operator==(const LightPhase&, const LightPhase&) = default;
};

struct TrafficLightConfig {
  std::string light_id;
  Segment stop_line;
  std::vector<LightPhase> phase_schedule;  // cycles after the last entry
  friend bool operator==(const TrafficLightConfig&, const TrafficLightConfig&) = default;
};

struct StaticObject {
  std::string object_id;
  StaticKind kind = StaticKind::cone;
  Pose2 pose;
  BodyGeometry body;
  friend bool operator==(const StaticObject&, const StaticObject&) = default;
};

struct Scenario {
  std::string scenario_id;
  std::string map_id;
  Pose2 ego_start;
  Vec2 ego_destination;
  BodyGeometry ego_body = kDefaultEgoBody;
  double time_limit = 0.0;
  std::vector<ActorSpec> actors;
  std::vector<WeatherWindow> weather_windows;
  std::vector<TrafficLightConfig> traffic_lights;
  std::vector<StaticObject> static_objects;
  double road_speed_limit = kDefaultRoadSpeedLimit;
  Category category = Category::basic_functional;
  std::string description;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Light state at time `t` under a cyclic schedule. Phase intervals are
/// half-open: [start, start + duration).
inline LightState light_state_at(const TrafficLightConfig& light, double t) {
  if (light.phase_schedule.empty()) return LightState::green;
  double cycle = 0.0;
  for (const auto& p : light.phase_schedule) cycle += p.duration;
  if (!(cycle > 0.0)) return light.phase_schedule.front().state;
  double u = std::fmod(std::max(t, 0.0), cycle);
  for (const auto& p : light.phase_schedule) {
    if (u < p.duration) return p.state;
    u -= p.duration;
  }
  return light.phase_schedule.back().state;
}

/// Params of the window containing `t` (start inclusive, end exclusive).
inline const WeatherWindow* weather_at(const std::vector<WeatherWindow>& windows, double t) {
  for (const auto& w : windows)
    if (w.start <= t && t < w.end) return &w;
  return nullptr;
}

}  // namespace vista
