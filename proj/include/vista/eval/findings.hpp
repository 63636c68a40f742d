#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "vista/error.hpp"
#include "vista/util/io.hpp"

namespace vista {

enum class Severity { IF, NC };

inline std::string_view to_string(Severity s) { return s == Severity::IF ? "IF" : "NC"; }

/// One metric violation over a contiguous interval [t_start, t_end).
struct Finding {
  std::string metric_id;
  Severity severity = Severity::NC;
  double t_start = 0.0;
  double t_end = 0.0;
  std::string subject;  // entity id the finding is about
  double value = 0.0;   // metric value at the worst point
  double threshold = 0.0;
  bool needs_review = false;  // heuristic detectors: a human confirms or dismisses

  friend bool operator==(const Finding&, const Finding&) = default;
};

/// Canonical order: (t_start, metric_id, subject), then the rest for stability.
inline bool finding_less(const Finding& a, const Finding& b) {
  return std::tie(a.t_start, a.metric_id, a.subject, a.t_end, a.severity, a.value) <
         std::tie(b.t_start, b.metric_id, b.subject, b.t_end, b.severity, b.value);
}

inline void sort_findings(std::vector<Finding>& f) { std::sort(f.begin(), f.end(), finding_less); }

// JSON has no infinity; unbounded values are written as null.
inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline double number_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

inline nlohmann::json finding_to_json(const Finding& f) {
  return {{"metric_id", f.metric_id},       {"severity", to_string(f.severity)}, {"t_start", f.t_start},
          {"t_end", f.t_end},               {"subject", f.subject},              {"value", json_number(f.value)},
          {"threshold", json_number(f.threshold)}, {"needs_review", f.needs_review}};
}

inline Finding finding_from_json(const nlohmann::json& j) {
  try {
    Finding f;
    f.metric_id = j.at("metric_id").get<std::string>();
    const auto sev = j.at("severity").get<std::string>();
    if (sev != "IF" && sev != "NC") throw SchemaError("severity", "must be IF or NC");
    f.severity = sev == "IF" ? Severity::IF : Severity::NC;
    f.t_start = j.value("t_start", 0.0);
    f.t_end = j.value("t_end", f.t_start);
    f.subject = j.value("subject", std::string{});
    f.value = j.contains("value") ? number_from_json(j.at("value")) : 0.0;
    f.threshold = j.contains("threshold") ? number_from_json(j.at("threshold")) : 0.0;
    f.needs_review = j.value("needs_review", false);
    if (f.t_end < f.t_start) throw SchemaError("t_end", "must be >= t_start");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("finding", e.what());
  }
}

}  // namespace vista
