#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vista/error.hpp"
#include "vista/geometry/rect.hpp"
#include "vista/util/io.hpp"

namespace vista {

enum class EntityType { ego, actor, static_object };

inline std::string_view to_string(EntityType t) {
  switch (t) {
    case EntityType::ego: return "ego";
    case EntityType::actor: return "actor";
    case EntityType::static_object: return "static";
  }
  return "?";
}

inline std::optional<EntityType> entity_type_from(std::string_view s) {
  if (s == "ego") return EntityType::ego;
  if (s == "actor") return EntityType::actor;
  if (s == "static") return EntityType::static_object;
  return std::nullopt;
}

/// One row of a simulation log: the state of one entity at one timestep.
struct StepRecord {
  double sim_time = 0.0;
  std::string entity_id;
  EntityType entity_type = EntityType::actor;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double length = 0.0;
  double width = 0.0;

  Pose2 pose() const { return {x, y, heading}; }
  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const { return heading_vector(heading) * speed; }
  OrientedRect rect() const { return {position(), heading, length, width}; }
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

using SimLog = std::vector<StepRecord>;

inline constexpr std::string_view kLogHeader = "sim_time,entity_id,entity_type,x,y,heading,speed,length,width";

inline std::string write_log_csv(const SimLog& log) {
  std::string out;
  out.reserve(64 * (log.size() + 1));
  out += kLogHeader;
  out += '\n';
  for (const auto& r : log) {
    if (r.entity_id.find_first_of(",\n\r\"") != std::string::npos)
      throw IoError("entity id '" + r.entity_id + "' cannot be written to CSV");
    out += util::format_double(r.sim_time);
    out += ',';
    out += r.entity_id;
    out += ',';
    out += to_string(r.entity_type);
    for (double v : {r.x, r.y, r.heading, r.speed, r.length, r.width}) {
      out += ',';
      out += util::format_double(v);
    }
    out += '\n';
  }
  return out;
}

/// Parses a log. Rows come back stably sorted by sim_time.
inline SimLog parse_log(std::string_view csv_text) {
  SimLog out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < csv_text.size()) {
    std::size_t eol = csv_text.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv_text.size();
    std::string_view line = csv_text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kLogHeader) throw FormatError(line_no, "header must be '" + std::string(kLogHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 9) throw FormatError(line_no, "expected 9 columns, got " + std::to_string(cells.size()));

    StepRecord r;
    static constexpr std::string_view kNames[] = {"sim_time", "entity_id", "entity_type", "x",    "y",
                                                  "heading",  "speed",     "length",      "width"};
    auto num = [&](std::size_t i) {
      auto v = util::parse_double(cells[i]);
      if (!v || !std::isfinite(*v))
        throw FormatError(line_no, "column '" + std::string(kNames[i]) + "' is not a finite number: '" +
                                       std::string(cells[i]) + "'");
      return *v;
    };
    r.sim_time = num(0);
    if (cells[1].empty()) throw FormatError(line_no, "empty entity_id");
    r.entity_id = std::string(cells[1]);
    auto type = entity_type_from(cells[2]);
    if (!type) throw FormatError(line_no, "unknown entity_type '" + std::string(cells[2]) + "'");
    r.entity_type = *type;
    r.x = num(3);
    r.y = num(4);
    r.heading = num(5);
    r.speed = num(6);
    r.length = num(7);
    r.width = num(8);
    out.push_back(std::move(r));
  }
  if (!header_seen) throw FormatError(1, "missing header");
  std::stable_sort(out.begin(), out.end(),
                   [](const StepRecord& a, const StepRecord& b) { return a.sim_time < b.sim_time; });
  return out;
}

/// All rows sharing one timestep, with the ego row pulled out.
struct Frame {
  double time = 0.0;
  StepRecord ego;
  std::vector<StepRecord> others;
};

/// Groups a time-sorted log into frames. Each timestep needs exactly one ego row.
inline std::vector<Frame> group_frames(const SimLog& log) {
  std::vector<Frame> frames;
  std::size_t i = 0;
  while (i < log.size()) {
    Frame f;
    f.time = log[i].sim_time;
    int egos = 0;
    for (; i < log.size() && log[i].sim_time == f.time; ++i) {
      if (log[i].entity_type == EntityType::ego) {
        f.ego = log[i];
        ++egos;
      } else {
        f.others.push_back(log[i]);
      }
    }
    if (egos != 1)
      throw FormatError(0, "timestep " + util::format_double(f.time) + " has " + std::to_string(egos) + " ego rows");
    frames.push_back(std::move(f));
  }
  return frames;
}

/// Step size of a frame sequence; falls back to `fallback` for logs with fewer than two frames.
inline double frame_dt(const std::vector<Frame>& frames, double fallback = 0.1) {
  if (frames.size() < 2) return fallback;
  return (frames.back().time - frames.front().time) / static_cast<double>(frames.size() - 1);
}

}  // namespace vista
