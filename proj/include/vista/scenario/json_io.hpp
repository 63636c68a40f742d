#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "vista/error.hpp"
#include "vista/scenario/types.hpp"
#include "vista/scenario/validate.hpp"
#include "vista/util/io.hpp"

namespace vista {

using Json = nlohmann::json;

struct ParseOptions {
  // Directory against which actor file references are resolved.
  std::filesystem::path base_dir;
  // Accept distribution-valued parameters (suite templates).
  bool allow_distributions = false;
};

/// Default body for actors whose document omits "body".
inline BodyGeometry default_body(ActorKind kind) {
  switch (kind) {
    case ActorKind::pedestrian: return {0.6, 0.6};
    case ActorKind::car: return {4.5, 1.9};
    case ActorKind::truck: return {8.0, 2.5};
    case ActorKind::bus: return {12.0, 2.55};
    case ActorKind::motorbike: return {2.2, 0.8};
    case ActorKind::cyclist: return {1.8, 0.6};
    case ActorKind::emergency: return {5.5, 2.1};
  }
  return {4.5, 1.9};
}

namespace detail {

inline constexpr double kDegToRad = kPi / 180.0;

// Cursor over a JSON value that remembers where it is, for error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(path_, what); }

  Node at(const std::string& key) const {
    require_object();
    auto it = j_.find(key);
    if (it == j_.end()) throw SchemaError(child_path(key), "missing required field");
    return {*it, child_path(key)};
  }
  std::optional<Node> opt(const std::string& key) const {
    require_object();
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return std::nullopt;
    return Node{*it, child_path(key)};
  }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key) && !j_.at(key).is_null(); }

  Node index(std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]"}; }

  void require_object() const {
    if (!j_.is_object()) fail("expected an object");
  }
  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& j_;
  std::string path_;
};

template <typename E, std::size_t N>
E read_enum(const Node& n, const EnumNames<E, N>& names) {
  const std::string s = n.string();
  if (auto e = enum_from(names, s)) return *e;
  n.fail("unknown value '" + s + "'");
}

inline double number_or(const Node& n, const std::string& key, double fallback) {
  auto o = n.opt(key);
  return o ? o->number() : fallback;
}

inline Vec2 read_point(const Node& n) { return {n.at("x").number(), n.at("y").number()}; }

// Accepts "heading" in radians or "heading_deg" in degrees.
inline Pose2 read_pose(const Node& n) {
  const double x = n.at("x").number();
  const double y = n.at("y").number();
  double heading = 0.0;
  if (n.has("heading") && n.has("heading_deg")) n.fail("give either heading or heading_deg, not both");
  if (auto h = n.opt("heading")) heading = h->number();
  else if (auto hd = n.opt("heading_deg")) heading = hd->number() * kDegToRad;
  else n.fail("missing heading (or heading_deg)");
  return {x, y, heading};
}

inline BodyGeometry read_body(const Node& n) { return {n.at("length").number(), n.at("width").number()}; }

inline Segment read_segment(const Node& n) { return {read_point(n.at("a")), read_point(n.at("b"))}; }

inline ParamValue read_param(const Node& n, bool allow_distributions) {
  const Json& j = n.json();
  if (j.is_number()) return n.number();
  if (!j.is_object() || j.size() != 1) n.fail("expected a number or a single-key distribution object");
  if (!allow_distributions) n.fail("distributions are only allowed in suite templates");
  const std::string family = j.begin().key();
  const Node b{j.begin().value(), n.path() + "." + family};
  ParamValue p;
  if (family == "constant") {
    p = ParamValue::Repr{dist::Constant{b.number()}};
  } else if (family == "uniform") {
    if (b.array_size() != 2) b.fail("uniform expects [lo, hi]");
    p = ParamValue::Repr{dist::Uniform{b.index(0).number(), b.index(1).number()}};
  } else if (family == "normal") {
    dist::Normal d;
    d.mean = b.at("mean").number();
    d.sd = b.at("sd").number();
    d.lo = number_or(b, "lo", -INFINITY);
    d.hi = number_or(b, "hi", INFINITY);
    p = ParamValue::Repr{d};
  } else if (family == "choice") {
    dist::Choice d;
    const Node values = b.at("values");
    for (std::size_t i = 0; i < values.array_size(); ++i) d.values.push_back(values.index(i).number());
    if (auto w = b.opt("weights")) {
      for (std::size_t i = 0; i < w->array_size(); ++i) d.weights.push_back(w->index(i).number());
    } else {
      d.weights.assign(d.values.size(), 1.0);
    }
    p = ParamValue::Repr{d};
  } else {
    n.fail("unknown distribution '" + family + "'");
  }
  if (auto err = p.check()) n.fail(*err);
  return p;
}

inline Trigger read_trigger(const Node& n, bool allow_distributions) {
  Trigger t;
  t.kind = read_enum(n.at("kind"), kTriggerKindNames);
  switch (t.kind) {
    case TriggerKind::immediate: break;
    case TriggerKind::at_time: t.time = read_param(n.at("time"), allow_distributions); break;
    case TriggerKind::ego_within_radius: t.radius = read_param(n.at("radius"), allow_distributions); break;
    case TriggerKind::ego_crosses_line: t.line = read_segment(n.at("line")); break;
  }
  return t;
}

inline ManeuverL2 read_maneuver(const Node& n, bool allow_distributions) {
  n.require_object();
  ManeuverL2 m;
  const Node type = n.at("type");
  try {
    m.kind = l2_kind_from_string(type.string());
  } catch (const UnsupportedManeuver& e) {
    throw UnsupportedManeuver(type.path() + ": " + e.what());
  }
  for (const auto& [key, value] : n.json().items()) {
    if (key == "type") continue;
    const Node v{value, n.path() + "." + key};
    constexpr std::string_view kDeg = "_deg";
    if (key.size() > kDeg.size() && key.ends_with(kDeg)) {
      const std::string base = key.substr(0, key.size() - kDeg.size());
      if (n.has(base)) v.fail("both '" + base + "' and '" + key + "' given");
      m.params[base] = read_param(v, allow_distributions).scaled(kDegToRad);
    } else {
      m.params[key] = read_param(v, allow_distributions);
    }
  }
  return m;
}

inline ActorSpec read_actor(const Node& n, bool allow_distributions) {
  n.require_object();
  ActorSpec a;
  a.actor_id = n.at("actor_id").string();
  a.kind = read_enum(n.at("kind"), kActorKindNames);
  a.body = n.has("body") ? read_body(n.at("body")) : default_body(a.kind);
  a.start_pose = read_pose(n.at("start_pose"));
  if (auto t = n.opt("trigger")) a.trigger = read_trigger(*t, allow_distributions);
  if (auto v = n.opt("speed_limit")) a.speed_limit = v->number();
  if (auto v = n.opt("start_speed")) a.start_speed = v->number();
  if (auto w = n.opt("waypoints")) {
    for (std::size_t i = 0; i < w->array_size(); ++i) {
      const Node p = w->index(i);
      a.waypoints.push_back({read_point(p), number_or(p, "speed", 0.0), number_or(p, "hold", 0.0)});
    }
  }
  if (auto ms = n.opt("maneuvers")) {
    for (std::size_t i = 0; i < ms->array_size(); ++i) a.maneuvers.push_back(read_maneuver(ms->index(i), allow_distributions));
  }
  return a;
}

inline Scenario read_scenario(const Node& root, const ParseOptions& opt) {
  root.require_object();
  if (auto v = root.opt("schema_version")) {
    if (!v->json().is_number_integer() || v->json().get<int>() != kSchemaVersion)
      v->fail("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  Scenario s;
  s.scenario_id = root.at("scenario_id").string();
  s.map_id = root.at("map_id").string();
  if (auto d = root.opt("description")) s.description = d->string();
  if (auto c = root.opt("category")) s.category = read_enum(*c, kCategoryNames);
  s.time_limit = root.at("time_limit").number();
  s.road_speed_limit = number_or(root, "road_speed_limit", kDefaultRoadSpeedLimit);

  const Node ego = root.at("ego");
  s.ego_start = read_pose(ego.at("start"));
  s.ego_destination = read_point(ego.at("destination"));
  if (auto b = ego.opt("body")) s.ego_body = read_body(*b);

  if (auto actors = root.opt("actors")) {
    for (std::size_t i = 0; i < actors->array_size(); ++i) {
      const Node entry = actors->index(i);
      if (entry.json().is_string()) {
        const std::filesystem::path file = opt.base_dir / entry.string();
        std::string text;
        try {
          text = util::read_file(file);
        } catch (const IoError& e) {
          entry.fail(e.what());
        }
        Json doc;
        try {
          doc = Json::parse(text);
        } catch (const Json::parse_error& e) {
          entry.fail(std::string("actor file is not valid JSON: ") + e.what());
        }
        s.actors.push_back(read_actor(Node{doc, file.filename().string()}, opt.allow_distributions));
      } else {
        s.actors.push_back(read_actor(entry, opt.allow_distributions));
      }
    }
  }
  if (auto ws = root.opt("weather_windows")) {
    for (std::size_t i = 0; i < ws->array_size(); ++i) {
      const Node w = ws->index(i);
      WeatherWindow win{w.at("start").number(), w.at("end").number(), {}};
      if (auto p = w.opt("params")) {
        p->require_object();
        for (const auto& [k, v] : p->json().items()) win.params[k] = Node{v, p->path() + "." + k}.number();
      }
      s.weather_windows.push_back(std::move(win));
    }
  }
  if (auto ls = root.opt("traffic_lights")) {
    for (std::size_t i = 0; i < ls->array_size(); ++i) {
      const Node l = ls->index(i);
      TrafficLightConfig cfg;
      cfg.light_id = l.at("light_id").string();
      cfg.stop_line = read_segment(l.at("stop_line"));
      const Node phases = l.at("phases");
      for (std::size_t k = 0; k < phases.array_size(); ++k) {
        const Node p = phases.index(k);
        cfg.phase_schedule.push_back({read_enum(p.at("state"), kLightStateNames), p.at("duration").number()});
      }
      s.traffic_lights.push_back(std::move(cfg));
    }
  }
  if (auto os = root.opt("static_objects")) {
    for (std::size_t i = 0; i < os->array_size(); ++i) {
      const Node o = os->index(i);
      StaticObject obj;
      obj.object_id = o.at("object_id").string();
      obj.kind = read_enum(o.at("kind"), kStaticKindNames);
      obj.pose = read_pose(o.at("pose"));
      obj.body = o.has("body") ? read_body(o.at("body")) : BodyGeometry{0.4, 0.4};
      s.static_objects.push_back(std::move(obj));
    }
  }
  return s;
}

inline Json write_point(Vec2 p) { return Json{{"x", p.x}, {"y", p.y}}; }
inline Json write_pose(const Pose2& p) { return Json{{"x", p.x}, {"y", p.y}, {"heading", p.heading}}; }
inline Json write_body(const BodyGeometry& b) { return Json{{"length", b.length}, {"width", b.width}}; }
inline Json write_segment(const Segment& s) { return Json{{"a", write_point(s.a)}, {"b", write_point(s.b)}}; }

inline Json write_param(const ParamValue& p) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return v;
        } else if constexpr (std::is_same_v<T, dist::Constant>) {
          return Json{{"constant", v.value}};
        } else if constexpr (std::is_same_v<T, dist::Uniform>) {
          return Json{{"uniform", Json::array({v.lo, v.hi})}};
        } else if constexpr (std::is_same_v<T, dist::Normal>) {
          Json n{{"mean", v.mean}, {"sd", v.sd}};
          if (std::isfinite(v.lo)) n["lo"] = v.lo;
          if (std::isfinite(v.hi)) n["hi"] = v.hi;
          return Json{{"normal", n}};
        } else {
          return Json{{"choice", Json{{"values", v.values}, {"weights", v.weights}}}};
        }
      },
      p.repr());
}

inline Json write_actor(const ActorSpec& a) {
  Json j{{"actor_id", a.actor_id},
         {"kind", enum_name(kActorKindNames, a.kind)},
         {"body", write_body(a.body)},
         {"start_pose", write_pose(a.start_pose)}};
  Json t{{"kind", enum_name(kTriggerKindNames, a.trigger.kind)}};
  switch (a.trigger.kind) {
    case TriggerKind::immediate: break;
    case TriggerKind::at_time: t["time"] = write_param(a.trigger.time); break;
    case TriggerKind::ego_within_radius: t["radius"] = write_param(a.trigger.radius); break;
    case TriggerKind::ego_crosses_line: t["line"] = write_segment(a.trigger.line); break;
  }
  j["trigger"] = t;
  if (a.speed_limit) j["speed_limit"] = *a.speed_limit;
  if (a.start_speed) j["start_speed"] = *a.start_speed;
  if (a.uses_waypoints()) {
    Json ws = Json::array();
    for (const auto& w : a.waypoints)
      ws.push_back(Json{{"x", w.position.x}, {"y", w.position.y}, {"speed", w.speed}, {"hold", w.hold}});
    j["waypoints"] = ws;
  }
  if (!a.maneuvers.empty()) {
    Json ms = Json::array();
    for (const auto& m : a.maneuvers) {
      Json mj{{"type", to_string(m.kind)}};
      for (const auto& [k, v] : m.params) mj[k] = write_param(v);
      ms.push_back(mj);
    }
    j["maneuvers"] = ms;
  }
  return j;
}

}  // namespace detail

/// Parses a schema-v1 scenario document and validates it. Throws SchemaError
/// for structural problems and ValidationError for broken invariants.
inline Scenario parse_scenario(std::string_view raw_text, const ParseOptions& opt = {}) {
  Json doc;
  try {
    doc = Json::parse(raw_text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  Scenario s = detail::read_scenario(detail::Node{doc, ""}, opt);
  const auto violations = validate_scenario(s, {.allow_distributions = opt.allow_distributions});
  if (!violations.empty()) {
    std::string msg = violations.front().message;
    for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i].message;
    throw ValidationError(violations.front().rule, msg);
  }
  return s;
}

inline Scenario parse_template(std::string_view raw_text, std::filesystem::path base_dir = {}) {
  return parse_scenario(raw_text, {.base_dir = std::move(base_dir), .allow_distributions = true});
}

inline Scenario load_scenario(const std::filesystem::path& file, bool allow_distributions = false) {
  return parse_scenario(util::read_file(file), {.base_dir = file.parent_path(), .allow_distributions = allow_distributions});
}

inline Json scenario_to_json(const Scenario& s) {
  using namespace detail;
  Json j{{"schema_version", kSchemaVersion},
         {"scenario_id", s.scenario_id},
         {"map_id", s.map_id},
         {"category", enum_name(kCategoryNames, s.category)},
         {"time_limit", s.time_limit},
         {"road_speed_limit", s.road_speed_limit},
         {"ego", Json{{"start", write_pose(s.ego_start)},
                      {"destination", write_point(s.ego_destination)},
                      {"body", write_body(s.ego_body)}}}};
  if (!s.description.empty()) j["description"] = s.description;
  j["actors"] = Json::array();
  for (const auto& a : s.actors) j["actors"].push_back(write_actor(a));
  j["weather_windows"] = Json::array();
  for (const auto& w : s.weather_windows) {
    Json params = Json::object();
    for (const auto& [k, v] : w.params) params[k] = v;
    j["weather_windows"].push_back(Json{{"start", w.start}, {"end", w.end}, {"params", params}});
  }
  j["traffic_lights"] = Json::array();
  for (const auto& l : s.traffic_lights) {
    Json phases = Json::array();
    for (const auto& p : l.phase_schedule)
      phases.push_back(Json{{"state", enum_name(kLightStateNames, p.state)}, {"duration", p.duration}});
    j["traffic_lights"].push_back(
        Json{{"light_id", l.light_id}, {"stop_line", write_segment(l.stop_line)}, {"phases", phases}});
  }
  j["static_objects"] = Json::array();
  for (const auto& o : s.static_objects)
    j["static_objects"].push_back(Json{{"object_id", o.object_id},
                                       {"kind", enum_name(kStaticKindNames, o.kind)},
                                       {"pose", write_pose(o.pose)},
                                       {"body", write_body(o.body)}});
  return j;
}

/// Canonical form: sorted keys, two-space indent, shortest round-trip
/// numbers, actors inlined, trailing newline.
inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

}  // namespace vista
