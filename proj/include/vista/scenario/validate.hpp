#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "vista/maneuver/compiler.hpp"
#include "vista/scenario/types.hpp"

namespace vista {

struct Violation {
  std::string rule;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidateOptions {
  // Templates may carry distributions; concrete scenarios may not.
  bool allow_distributions = false;
};

namespace detail {

class ViolationSink {
 public:
  void add(std::string rule, std::string message) { out_.push_back({std::move(rule), std::move(message)}); }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

// Ids end up as CSV cells in simulation logs; "ego" is reserved.
inline bool id_format_ok(const std::string& id) {
  return id != "ego" && id.find_first_of(",\"\n\r") == std::string::npos;
}

inline bool body_ok(const BodyGeometry& b) {
  return b.length > 0.0 && b.width > 0.0 && std::isfinite(b.length) && std::isfinite(b.width);
}

// Checks a parameter that may be a distribution. Returns the literal value
// when concrete, nullopt otherwise.
inline std::optional<double> check_param(const ParamValue& p, const std::string& where, const ValidateOptions& opt,
                                         ViolationSink& sink) {
  if (auto err = p.check()) {
    sink.add("param_distribution_valid", where + ": " + *err);
    return std::nullopt;
  }
  if (p.is_literal()) return p.literal();
  if (!opt.allow_distributions) sink.add("params_concrete", where + ": distribution in a concrete scenario");
  return std::nullopt;
}

inline void validate_actor(const ActorSpec& a, const std::string& where, const ValidateOptions& opt,
                           ViolationSink& sink) {
  if (a.actor_id.empty()) sink.add("actor_id_nonempty", where + ": actor_id is empty");
  if (!body_ok(a.body)) sink.add("body_positive", where + ": body dimensions must be > 0");
  if (!a.start_pose.finite()) sink.add("pose_finite", where + ": start_pose must be finite");
  if (a.speed_limit && !(*a.speed_limit > 0.0 && std::isfinite(*a.speed_limit)))
    sink.add("actor_speed_limit_positive", where + ": speed_limit must be > 0");
  if (a.start_speed && !(*a.start_speed >= 0.0 && std::isfinite(*a.start_speed)))
    sink.add("start_speed_nonnegative", where + ": start_speed must be >= 0");

  const Trigger& t = a.trigger;
  switch (t.kind) {
    case TriggerKind::immediate:
      break;
    case TriggerKind::at_time:
      if (auto v = check_param(t.time, where + ".trigger.time", opt, sink); v && !(*v >= 0.0))
        sink.add("trigger_time_nonnegative", where + ": trigger time must be >= 0");
      break;
    case TriggerKind::ego_within_radius:
      if (auto v = check_param(t.radius, where + ".trigger.radius", opt, sink); v && !(*v > 0.0))
        sink.add("trigger_radius_positive", where + ": trigger radius must be > 0");
      break;
    case TriggerKind::ego_crosses_line:
      if (distance(t.line.a, t.line.b) <= 0.0 || !std::isfinite(distance(t.line.a, t.line.b)))
        sink.add("trigger_line_nondegenerate", where + ": trigger line needs two distinct finite points");
      break;
  }

  if (a.waypoints.empty() && a.maneuvers.empty()) {
    sink.add("script_nonempty", where + ": actor script is empty");
    return;
  }
  if (a.uses_waypoints()) {
    if (!a.maneuvers.empty())
      sink.add("script_exclusive", where + ": use either waypoints or maneuvers, not both");
    bool ok = true;
    for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
      const auto& w = a.waypoints[i];
      const bool finite = std::isfinite(w.position.x) && std::isfinite(w.position.y) && std::isfinite(w.speed) &&
                          std::isfinite(w.hold);
      const bool moving_leg =
          i + 1 < a.waypoints.size() && distance(w.position, a.waypoints[i + 1].position) > 0.0;
      if (!finite || w.speed < 0.0 || w.hold < 0.0 || (moving_leg && !(w.speed > 0.0))) ok = false;
    }
    if (!ok)
      sink.add("waypoint_params_valid",
               where + ": waypoints need finite coordinates, hold >= 0, and speed > 0 on every moving leg");
    return;
  }

  bool concrete = true;
  for (std::size_t i = 0; i < a.maneuvers.size(); ++i)
    for (const auto& [key, value] : a.maneuvers[i].params)
      if (!check_param(value, where + ".maneuvers[" + std::to_string(i) + "]." + key, opt, sink)) concrete = false;
  if (!concrete) return;
  for (std::size_t i = 0; i < a.maneuvers.size(); ++i) {
    try {
      expand_l2(a.maneuvers[i]);
    } catch (const Error& e) {
      sink.add("maneuver_params_valid", where + ".maneuvers[" + std::to_string(i) + "]: " + e.what());
    }
  }
}

}  // namespace detail

/// Every broken invariant, in document order. Empty means valid.
inline std::vector<Violation> validate_scenario(const Scenario& s, const ValidateOptions& opt = {}) {
  detail::ViolationSink sink;
  if (s.scenario_id.empty()) sink.add("scenario_id_nonempty", "scenario_id is empty");
  if (!(s.time_limit > 0.0) || !std::isfinite(s.time_limit))
    sink.add("time_limit_positive", "time_limit must be finite and > 0");
  if (!(s.road_speed_limit > 0.0) || !std::isfinite(s.road_speed_limit))
    sink.add("speed_limit_positive", "road_speed_limit must be finite and > 0");
  if (!s.ego_start.finite() || !std::isfinite(s.ego_destination.x) || !std::isfinite(s.ego_destination.y))
    sink.add("pose_finite", "ego start and destination must be finite");
  else if (distance(s.ego_start.position(), s.ego_destination) <= 0.0)
    sink.add("destination_distinct", "ego destination coincides with the start position");
  if (!detail::body_ok(s.ego_body)) sink.add("body_positive", "ego body dimensions must be > 0");

  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.actors.size(); ++i) {
    const auto& a = s.actors[i];
    const std::string where = "actors[" + std::to_string(i) + "]";
    if (!ids.insert(a.actor_id).second) sink.add("actor_ids_unique", where + ": duplicate actor id '" + a.actor_id + "'");
    if (!detail::id_format_ok(a.actor_id))
      sink.add("entity_id_format", where + ": id must not be 'ego' or contain commas, quotes or line breaks");
    detail::validate_actor(a, where, opt, sink);
  }

  for (std::size_t i = 0; i < s.weather_windows.size(); ++i) {
    const auto& w = s.weather_windows[i];
    if (!(w.start < w.end))
      sink.add("weather_window_order", "weather_windows[" + std::to_string(i) + "]: start must be < end");
  }
  for (std::size_t i = 1; i < s.weather_windows.size(); ++i) {
    const auto& prev = s.weather_windows[i - 1];
    const auto& cur = s.weather_windows[i];
    if (cur.start < prev.start)
      sink.add("weather_windows_sorted", "weather_windows[" + std::to_string(i) + "]: not sorted by start time");
    else if (cur.start < prev.end)
      sink.add("weather_windows_disjoint", "weather_windows[" + std::to_string(i) + "]: overlaps the previous window");
  }

  std::set<std::string> light_ids;
  for (std::size_t i = 0; i < s.traffic_lights.size(); ++i) {
    const auto& l = s.traffic_lights[i];
    const std::string where = "traffic_lights[" + std::to_string(i) + "]";
    if (!light_ids.insert(l.light_id).second) sink.add("light_ids_unique", where + ": duplicate light id");
    if (l.phase_schedule.empty()) sink.add("light_schedule_nonempty", where + ": empty phase schedule");
    for (const auto& p : l.phase_schedule)
      if (!(p.duration > 0.0) || !std::isfinite(p.duration)) {
        sink.add("light_duration_positive", where + ": phase durations must be > 0");
        break;
      }
  }

  std::set<std::string> object_ids;
  for (std::size_t i = 0; i < s.static_objects.size(); ++i) {
    const auto& o = s.static_objects[i];
    const std::string where = "static_objects[" + std::to_string(i) + "]";
    if (!object_ids.insert(o.object_id).second) sink.add("object_ids_unique", where + ": duplicate object id");
    else if (ids.count(o.object_id)) sink.add("entity_ids_unique", where + ": id '" + o.object_id + "' is also an actor id");
    if (!detail::id_format_ok(o.object_id))
      sink.add("entity_id_format", where + ": id must not be 'ego' or contain commas, quotes or line breaks");
    if (!detail::body_ok(o.body)) sink.add("body_positive", where + ": body dimensions must be > 0");
    if (!o.pose.finite()) sink.add("pose_finite", where + ": pose must be finite");
  }
  return sink.take();
}

}  // namespace vista
