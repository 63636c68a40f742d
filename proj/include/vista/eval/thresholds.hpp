#pragma once

#include <string>

#include "json.hpp"
#include "vista/error.hpp"

namespace vista {

// Metric limits. Defaults are common road-safety values, not normative ones;
// override them per suite with a thresholds JSON file.
struct Thresholds {
  double ttc_min = 1.5;                // s
  double temporal_gap_min = 1.0;       // s
  double lat_clear_min = 0.5;          // m
  double lon_clear_min = 2.0;          // m
  double speed_tolerance = 0.5;        // m/s above the road limit
  double swerve_rate = 0.3;            // rad/s
  double swerve_window = 2.0;          // s
  double harsh_brake = 4.0;            // m/s^2
  double tailgate_time_headway = 1.0;  // s

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

enum class GapDivisor { speed_sum, ego_only };

// Fixed evaluation settings that are not pass/fail limits. The context guards
// ("without a valid reason") are kept apart from Thresholds so that loosening
// a threshold can never enlarge a guard and so add a finding.
struct EvalSettings {
  double ttc_step = 0.05;     // s, sweep resolution
  double ttc_horizon = 20.0;  // s
  GapDivisor gap_divisor = GapDivisor::speed_sum;
  double gap_divisor_floor = 0.1;  // m/s; below it the temporal gap is infinite

  double swerve_kernel = 1.0;        // s, trailing window for mean |heading rate|
  double swerve_min_speed = 1.0;     // m/s
  double swerve_guard_ahead = 4.0;   // m, entity this close ahead excuses heading changes
  double brake_guard_decel = 3.0;    // m/s^2, sizes the braking-excuse corridor
  double brake_guard_margin = 4.0;   // m, added to that corridor's length
  double guard_lateral_margin = 0.5; // m, corridor half-width beyond the ego body
  double tailgate_sustain = 2.0;     // s, headway must stay low for longer than this
  double tailgate_min_speed = 1.0;   // m/s
  double tailgate_max_heading_diff = 0.7853981633974483;  // rad, lead must roughly share the direction
};

inline Thresholds thresholds_from_json(const nlohmann::json& j, Thresholds th = {}) {
  if (!j.is_object()) throw SchemaError("thresholds", "expected an object");
  auto take = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw SchemaError(std::string("thresholds.") + key, "expected a number");
    field = j.at(key).get<double>();
    if (!(field > 0.0)) throw ValidationError("thresholds_positive", std::string(key) + " must be > 0");
  };
  for (const auto& [key, _] : j.items()) {
    static const char* known[] = {"ttc_min",     "temporal_gap_min", "lat_clear_min", "lon_clear_min",
                                  "speed_tolerance", "swerve_rate",  "swerve_window", "harsh_brake",
                                  "tailgate_time_headway"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw SchemaError("thresholds." + key, "unknown threshold");
  }
  take("ttc_min", th.ttc_min);
  take("temporal_gap_min", th.temporal_gap_min);
  take("lat_clear_min", th.lat_clear_min);
  take("lon_clear_min", th.lon_clear_min);
  take("speed_tolerance", th.speed_tolerance);
  take("swerve_rate", th.swerve_rate);
  take("swerve_window", th.swerve_window);
  take("harsh_brake", th.harsh_brake);
  take("tailgate_time_headway", th.tailgate_time_headway);
  return th;
}

inline nlohmann::json thresholds_to_json(const Thresholds& th) {
  return {{"ttc_min", th.ttc_min},
          {"temporal_gap_min", th.temporal_gap_min},
          {"lat_clear_min", th.lat_clear_min},
          {"lon_clear_min", th.lon_clear_min},
          {"speed_tolerance", th.speed_tolerance},
          {"swerve_rate", th.swerve_rate},
          {"swerve_window", th.swerve_window},
          {"harsh_brake", th.harsh_brake},
          {"tailgate_time_headway", th.tailgate_time_headway}};
}

}  // namespace vista
