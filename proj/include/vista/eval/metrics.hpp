#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vista/eval/findings.hpp"
#include "vista/eval/log.hpp"
#include "vista/eval/thresholds.hpp"
#include "vista/geometry/rect.hpp"
#include "vista/scenario/types.hpp"

namespace vista {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-subject metric values on the frame grid; nullopt where undefined.
struct Series {
  std::vector<double> times;
  std::map<std::string, std::vector<std::optional<double>>> by_subject;

  std::vector<std::optional<double>>& slot(const std::string& subject) {
    auto& v = by_subject[subject];
    if (v.size() != times.size()) v.resize(times.size());
    return v;
  }
  /// Minimum over subjects at each frame (infinity when nothing is defined).
  std::vector<double> min_over_subjects() const {
    std::vector<double> out(times.size(), kInf);
    for (const auto& [_, vals] : by_subject)
      for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i]) out[i] = std::min(out[i], *vals[i]);
    return out;
  }
};

namespace detail {

// Turns per-frame flags into findings, one per contiguous run.
// `worse(a, b)` is true when a is a worse value than b.
inline std::vector<Finding> runs_to_findings(const std::vector<double>& times, double dt,
                                             const std::vector<std::optional<double>>& violating,
                                             const std::string& metric, Severity sev, const std::string& subject,
                                             double threshold, bool lower_is_worse) {
  std::vector<Finding> out;
  std::size_t i = 0;
  while (i < violating.size()) {
    if (!violating[i]) {
      ++i;
      continue;
    }
    Finding f{metric, sev, times[i], times[i], subject, *violating[i], threshold, false};
    for (; i < violating.size() && violating[i]; ++i) {
      const double v = *violating[i];
      if (lower_is_worse ? v < f.value : v > f.value) f.value = v;
      f.t_end = times[i] + dt;
    }
    out.push_back(f);
  }
  return out;
}

inline std::vector<double> frame_times(const std::vector<Frame>& frames) {
  std::vector<double> t;
  t.reserve(frames.size());
  for (const auto& f : frames) t.push_back(f.time);
  return t;
}

// Rectangle ahead of the front bumper in the ego's heading.
inline OrientedRect forward_box(const StepRecord& ego, double length, double lateral_margin) {
  const Vec2 fwd = heading_vector(ego.heading);
  return {ego.position() + fwd * (ego.length / 2.0 + length / 2.0), ego.heading, length,
          ego.width + 2.0 * lateral_margin};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Collisions

inline std::vector<Finding> detect_collisions(const std::vector<Frame>& frames, double dt) {
  Series s;
  s.times = detail::frame_times(frames);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const OrientedRect ego = frames[i].ego.rect();
    for (const auto& o : frames[i].others)
      if (overlaps(ego, o.rect())) s.slot(o.entity_id)[i] = 0.0;
  }
  std::vector<Finding> out;
  for (const auto& [id, vals] : s.by_subject) {
    auto f = detail::runs_to_findings(s.times, dt, vals, "collision", Severity::IF, id, 0.0, true);
    out.insert(out.end(), f.begin(), f.end());
  }
  sort_findings(out);
  return out;
}

// ---------------------------------------------------------------------------
// Time to collision

/// Smallest swept tau = k*step (tau <= horizon) at which the two rectangles,
/// each moving at constant velocity, overlap; infinity if none.
inline double time_to_collision(const OrientedRect& a, Vec2 va, const OrientedRect& b, Vec2 vb, double step = 0.05,
                                double horizon = 20.0) {
  const Vec2 rel = vb - va;  // only the relative motion matters
  const double reach = 0.5 * std::hypot(a.length, a.width) + 0.5 * std::hypot(b.length, b.width);
  if (distance(a.center, b.center) - reach > rel.norm() * horizon + 1e-9) return kInf;
  const auto n = static_cast<long>(std::floor(horizon / step + 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double tau = static_cast<double>(k) * step;
    if (overlaps(a, b.translated(rel * tau))) return tau;
  }
  return kInf;
}

inline Series ttc_series(const std::vector<Frame>& frames, const EvalSettings& es = {}) {
  Series s;
  s.times = detail::frame_times(frames);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const StepRecord& e = frames[i].ego;
    for (const auto& o : frames[i].others)
      s.slot(o.entity_id)[i] =
          time_to_collision(e.rect(), e.velocity(), o.rect(), o.velocity(), es.ttc_step, es.ttc_horizon);
  }
  return s;
}

/// NC below ttc_min; IF when a collision with the same subject overlaps the interval.
inline std::vector<Finding> ttc_findings(const Series& s, double dt, const Thresholds& th,
                                         const std::vector<Finding>& collisions) {
  std::vector<Finding> out;
  for (const auto& [id, vals] : s.by_subject) {
    std::vector<std::optional<double>> bad(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] && *vals[i] < th.ttc_min) bad[i] = *vals[i];
    for (Finding f : detail::runs_to_findings(s.times, dt, bad, "ttc", Severity::NC, id, th.ttc_min, true)) {
      for (const auto& c : collisions)
        if (c.subject == id && c.t_start < f.t_end && f.t_start < c.t_end) f.severity = Severity::IF;
      out.push_back(f);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Safety envelope

struct Clearance {
  std::optional<double> lateral;
  std::optional<double> longitudinal;
};

/// Clearances of `other` in the ego body frame. Lateral clearance is defined
/// for bodies overlapping the ego's longitudinal extent; longitudinal
/// clearance for the remaining bodies whose lateral extent comes within
/// the ego's half-width plus lat_clear_min.
inline Clearance clearance(const StepRecord& ego, const StepRecord& other, const Thresholds& th) {
  const double hl = ego.length / 2.0;
  const double hw = ego.width / 2.0;
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const Vec2& c : other.rect().corners()) {
    const Vec2 p = rotate(c - ego.position(), -ego.heading);
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  Clearance out;
  if (xmin < hl && xmax > -hl) {
    out.lateral = std::max(ymin - hw, -hw - ymax);
  } else if (ymin < hw + th.lat_clear_min && ymax > -hw - th.lat_clear_min) {
    out.longitudinal = std::max(xmin - hl, -hl - xmax);
  }
  return out;
}

struct ClearanceSeries {
  Series lateral;
  Series longitudinal;
};

inline ClearanceSeries clearance_series(const std::vector<Frame>& frames, const Thresholds& th) {
  ClearanceSeries cs;
  cs.lateral.times = cs.longitudinal.times = detail::frame_times(frames);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    for (const auto& o : frames[i].others) {
      const Clearance c = clearance(frames[i].ego, o, th);
      if (c.lateral) cs.lateral.slot(o.entity_id)[i] = *c.lateral;
      if (c.longitudinal) cs.longitudinal.slot(o.entity_id)[i] = *c.longitudinal;
    }
  }
  return cs;
}

inline std::vector<Finding> below_findings(const Series& s, double dt, double limit, const std::string& metric) {
  std::vector<Finding> out;
  for (const auto& [id, vals] : s.by_subject) {
    std::vector<std::optional<double>> bad(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] && *vals[i] < limit) bad[i] = *vals[i];
    auto f = detail::runs_to_findings(s.times, dt, bad, metric, Severity::NC, id, limit, true);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Temporal gap

inline double temporal_gap(const StepRecord& ego, const StepRecord& other, const EvalSettings& es = {}) {
  const double gap = rect_distance(ego.rect(), other.rect());
  const double div = es.gap_divisor == GapDivisor::speed_sum ? std::abs(ego.speed) + std::abs(other.speed)
                                                             : std::abs(ego.speed);
  if (div < es.gap_divisor_floor) return kInf;
  return gap / div;
}

inline Series temporal_gap_series(const std::vector<Frame>& frames, const EvalSettings& es = {}) {
  Series s;
  s.times = detail::frame_times(frames);
  for (std::size_t i = 0; i < frames.size(); ++i)
    for (const auto& o : frames[i].others) s.slot(o.entity_id)[i] = temporal_gap(frames[i].ego, o, es);
  return s;
}

// ---------------------------------------------------------------------------
// Speed limit

inline std::vector<Finding> speed_violations(const std::vector<Frame>& frames, double dt, double road_speed_limit,
                                             const Thresholds& th) {
  const double limit = road_speed_limit + th.speed_tolerance;
  std::vector<std::optional<double>> bad(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i)
    if (frames[i].ego.speed > limit) bad[i] = frames[i].ego.speed;
  return detail::runs_to_findings(detail::frame_times(frames), dt, bad, "speed_limit", Severity::NC, "ego", limit,
                                  false);
}

// ---------------------------------------------------------------------------
// Driving-behavior detectors (heuristic; every finding needs review)

/// Red/yellow stop lines active at a time; used to excuse braking.
using LightContext = std::function<std::vector<Segment>(double t)>;

inline LightContext light_context(const Scenario& s) {
  return [lights = s.traffic_lights](double t) {
    std::vector<Segment> out;
    for (const auto& l : lights)
      if (light_state_at(l, t) != LightState::green) out.push_back(l.stop_line);
    return out;
  };
}

namespace detail {

inline bool any_in_box(const Frame& f, const OrientedRect& box) {
  for (const auto& o : f.others)
    if (overlaps(box, o.rect())) return true;
  return false;
}

// Swerving: the mean |heading rate| over a short trailing kernel stays above
// swerve_rate for at least swerve_window while moving, with nothing close
// ahead, and the heading rate reverses sign inside the run. The reversal
// requirement keeps ordinary turns from being reported.
inline std::vector<Finding> swerving(const std::vector<Frame>& frames, double dt, const Thresholds& th,
                                     const EvalSettings& es) {
  const std::size_t n = frames.size();
  std::vector<Finding> out;
  if (n < 2) return out;
  std::vector<double> rate(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    rate[i] = angle_diff(frames[i].ego.heading, frames[i - 1].ego.heading) / (frames[i].time - frames[i - 1].time);
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(es.swerve_kernel / dt)));
  std::vector<std::optional<double>> flag(n);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t lo = i >= k ? i - k + 1 : 1;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += std::abs(rate[j]);
    const double mean = sum / static_cast<double>(i - lo + 1);
    if (mean <= th.swerve_rate || frames[i].ego.speed <= es.swerve_min_speed) continue;
    if (any_in_box(frames[i], forward_box(frames[i].ego, es.swerve_guard_ahead, es.guard_lateral_margin))) continue;
    flag[i] = mean;
  }
  const double significant = 0.5 * th.swerve_rate;
  const auto times = frame_times(frames);
  std::size_t i = 0;
  while (i < n) {
    if (!flag[i]) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    double worst = 0.0;
    for (; i < n && flag[i]; ++i) worst = std::max(worst, *flag[i]);
    const std::size_t last = i - 1;
    if (times[last] - times[first] + dt < th.swerve_window - 1e-9) continue;
    bool pos = false, neg = false;
    for (std::size_t j = first >= k ? first - k + 1 : 1; j <= last; ++j) {
      pos = pos || rate[j] > significant;
      neg = neg || rate[j] < -significant;
    }
    if (pos && neg) out.push_back({"swerving", Severity::NC, times[first], times[last] + dt, "ego", worst,
                                   th.swerve_rate, true});
  }
  return out;
}

// Harsh braking: finite-difference deceleration above harsh_brake with no
// entity in the stopping corridor and no red/yellow stop line in it.
inline std::vector<Finding> harsh_braking(const std::vector<Frame>& frames, double dt, const Thresholds& th,
                                          const EvalSettings& es, const LightContext& lights) {
  const std::size_t n = frames.size();
  std::vector<std::optional<double>> flag(n);
  for (std::size_t i = 1; i < n; ++i) {
    const double decel = (frames[i - 1].ego.speed - frames[i].ego.speed) / (frames[i].time - frames[i - 1].time);
    if (decel <= th.harsh_brake) continue;
    const double v = frames[i - 1].ego.speed;
    const OrientedRect box = forward_box(frames[i].ego, v * v / (2.0 * es.brake_guard_decel) + es.brake_guard_margin,
                                         es.guard_lateral_margin);
    if (any_in_box(frames[i], box)) continue;
    bool light = false;
    if (lights)
      for (const Segment& line : lights(frames[i].time)) light = light || segment_intersects_rect(line, box);
    if (light) continue;
    flag[i] = decel;
  }
  auto out = runs_to_findings(frame_times(frames), dt, flag, "harsh_braking", Severity::NC, "ego", th.harsh_brake,
                              false);
  for (auto& f : out) f.needs_review = true;
  return out;
}

// Tailgating: time headway (bumper gap / ego speed) to the nearest actor
// ahead in the ego's lane and roughly the same direction stays below
// tailgate_time_headway for longer than the sustain time.
inline std::vector<Finding> tailgating(const std::vector<Frame>& frames, double dt, const Thresholds& th,
                                       const EvalSettings& es) {
  Series s;
  s.times = frame_times(frames);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const StepRecord& e = frames[i].ego;
    if (e.speed <= es.tailgate_min_speed) continue;
    const double hl = e.length / 2.0;
    const double hw = e.width / 2.0;
    const StepRecord* lead = nullptr;
    double best_gap = kInf;
    for (const auto& o : frames[i].others) {
      if (o.entity_type != EntityType::actor) continue;
      if (std::abs(angle_diff(o.heading, e.heading)) >= es.tailgate_max_heading_diff) continue;
      double xmin = kInf, ymin = kInf, ymax = -kInf;
      for (const Vec2& c : o.rect().corners()) {
        const Vec2 p = rotate(c - e.position(), -e.heading);
        xmin = std::min(xmin, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
      }
      if (xmin < hl || ymin >= hw || ymax <= -hw) continue;
      if (xmin - hl < best_gap) {
        best_gap = xmin - hl;
        lead = &o;
      }
    }
    if (lead && best_gap / e.speed < th.tailgate_time_headway) s.slot(lead->entity_id)[i] = best_gap / e.speed;
  }
  std::vector<Finding> out;
  for (const auto& [id, vals] : s.by_subject)
    for (Finding f : runs_to_findings(s.times, dt, vals, "tailgating", Severity::NC, id, th.tailgate_time_headway,
                                      true)) {
      if (f.t_end - f.t_start <= es.tailgate_sustain + 1e-9) continue;
      f.needs_review = true;
      out.push_back(f);
    }
  return out;
}

}  // namespace detail

inline std::vector<Finding> behavior_findings(const std::vector<Frame>& frames, double dt, const Thresholds& th,
                                              const EvalSettings& es = {}, const LightContext& lights = {}) {
  auto out = detail::swerving(frames, dt, th, es);
  auto hb = detail::harsh_braking(frames, dt, th, es, lights);
  auto tg = detail::tailgating(frames, dt, th, es);
  out.insert(out.end(), hb.begin(), hb.end());
  out.insert(out.end(), tg.begin(), tg.end());
  sort_findings(out);
  return out;
}

// ---------------------------------------------------------------------------

/// Every metric over a log. Findings come back in canonical order.
inline std::vector<Finding> all_findings(const std::vector<Frame>& frames, double dt, double road_speed_limit,
                                         const Thresholds& th, const EvalSettings& es = {},
                                         const LightContext& lights = {}) {
  std::vector<Finding> out = detect_collisions(frames, dt);
  auto add = [&out](std::vector<Finding> f) { out.insert(out.end(), f.begin(), f.end()); };
  add(ttc_findings(ttc_series(frames, es), dt, th, out));
  const ClearanceSeries cs = clearance_series(frames, th);
  add(below_findings(cs.lateral, dt, th.lat_clear_min, "lateral_clearance"));
  add(below_findings(cs.longitudinal, dt, th.lon_clear_min, "longitudinal_clearance"));
  add(below_findings(temporal_gap_series(frames, es), dt, th.temporal_gap_min, "temporal_gap"));
  add(speed_violations(frames, dt, road_speed_limit, th));
  add(behavior_findings(frames, dt, th, es, lights));
  sort_findings(out);
  return out;
}

}  // namespace vista
