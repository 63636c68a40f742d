#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vista/error.hpp"
#include "vista/eval/findings.hpp"
#include "vista/eval/metrics.hpp"
#include "vista/scenario/types.hpp"
#include "vista/sim/harness.hpp"

namespace vista {

enum class Outcome { PASS, PASS_NC, FAIL };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::PASS: return "PASS";
    case Outcome::PASS_NC: return "PASS_NC";
    case Outcome::FAIL: return "FAIL";
  }
  return "?";
}

inline std::optional<Outcome> outcome_from(std::string_view s) {
  if (s == "PASS") return Outcome::PASS;
  if (s == "PASS_NC") return Outcome::PASS_NC;
  if (s == "FAIL") return Outcome::FAIL;
  return std::nullopt;
}

inline std::optional<Completion> completion_from(std::string_view s) {
  if (s == "reached_destination") return Completion::reached_destination;
  if (s == "timed_out") return Completion::timed_out;
  return std::nullopt;
}

/// FAIL on any immediate failure or a missed time budget; PASS_NC when the
/// run completed with only non-conformities; PASS otherwise.
inline Outcome classify(Completion completion, const std::vector<Finding>& findings) {
  const bool any_if = std::any_of(findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::IF; });
  if (any_if || completion == Completion::timed_out) return Outcome::FAIL;
  if (!findings.empty()) return Outcome::PASS_NC;
  return Outcome::PASS;
}

struct Verdict {
  std::string test_case_id;
  std::string scenario_id;
  Category category = Category::basic_functional;
  Outcome outcome = Outcome::PASS;
  std::vector<Finding> findings;
  Completion completion = Completion::timed_out;
  std::optional<double> completion_time;
  std::vector<std::string> notes;  // manual-annotation slot
  bool forced = false;
};

/// Manual override from a reviewer. Applied in file order.
struct Annotation {
  enum class Action { add, dismiss, force_outcome };
  std::string test_case_id;
  Action action = Action::add;
  nlohmann::json payload;
};

inline std::vector<Annotation> parse_annotations(const nlohmann::json& j) {
  if (!j.is_array()) throw SchemaError("annotations", "expected a list");
  std::vector<Annotation> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("test_case_id") || !e.at("test_case_id").is_string())
      throw SchemaError(where + ".test_case_id", "required string");
    if (!e.contains("action") || !e.at("action").is_string()) throw SchemaError(where + ".action", "required string");
    Annotation a;
    a.test_case_id = e.at("test_case_id").get<std::string>();
    const auto act = e.at("action").get<std::string>();
    if (act == "add") a.action = Annotation::Action::add;
    else if (act == "dismiss") a.action = Annotation::Action::dismiss;
    else if (act == "force_outcome") a.action = Annotation::Action::force_outcome;
    else throw SchemaError(where + ".action", "must be add, dismiss or force_outcome");
    a.payload = e.value("payload", nlohmann::json::object());
    if (!a.payload.is_object()) throw SchemaError(where + ".payload", "expected an object");
    if (a.action == Annotation::Action::add) finding_from_json(a.payload);  // validate early
    if (a.action == Annotation::Action::dismiss && !a.payload.contains("metric_id"))
      throw SchemaError(where + ".payload.metric_id", "required for dismiss");
    if (a.action == Annotation::Action::force_outcome &&
        !(a.payload.contains("outcome") && a.payload.at("outcome").is_string() &&
          outcome_from(a.payload.at("outcome").get<std::string>())))
      throw SchemaError(where + ".payload.outcome", "must be PASS, PASS_NC or FAIL");
    out.push_back(std::move(a));
  }
  return out;
}

namespace detail {

inline bool dismiss_matches(const nlohmann::json& p, const Finding& f) {
  if (p.at("metric_id").get<std::string>() != f.metric_id) return false;
  if (p.contains("subject") && p.at("subject").get<std::string>() != f.subject) return false;
  if (p.contains("t_start") && std::abs(p.at("t_start").get<double>() - f.t_start) > 1e-6) return false;
  return true;
}

}  // namespace detail

/// Applies the annotations addressed to v.test_case_id, then re-derives the outcome.
inline void apply_annotations(Verdict& v, const std::vector<Annotation>& annotations) {
  std::optional<Outcome> forced;
  for (const auto& a : annotations) {
    if (a.test_case_id != v.test_case_id) continue;
    switch (a.action) {
      case Annotation::Action::add:
        v.findings.push_back(finding_from_json(a.payload));
        break;
      case Annotation::Action::dismiss: {
        const auto before = v.findings.size();
        std::erase_if(v.findings, [&](const Finding& f) { return detail::dismiss_matches(a.payload, f); });
        if (before == v.findings.size()) v.notes.push_back("dismiss matched no finding: " + a.payload.dump());
        break;
      }
      case Annotation::Action::force_outcome:
        forced = outcome_from(a.payload.at("outcome").get<std::string>());
        break;
    }
    if (a.payload.contains("note") && a.payload.at("note").is_string())
      v.notes.push_back(a.payload.at("note").get<std::string>());
  }
  sort_findings(v.findings);
  v.outcome = classify(v.completion, v.findings);
  if (forced) {
    v.outcome = *forced;
    v.forced = true;
  }
}

struct EvalInput {
  std::string test_case_id;
  const SimLog* log = nullptr;
  Completion completion = Completion::timed_out;
  std::optional<double> completion_time;
  double dt = 0.1;  // used when the log has fewer than two frames
};

inline Verdict evaluate(const EvalInput& in, const Scenario& s, const Thresholds& th,
                        const std::vector<Annotation>& annotations = {}, const EvalSettings& es = {}) {
  Verdict v;
  v.test_case_id = in.test_case_id.empty() ? s.scenario_id : in.test_case_id;
  v.scenario_id = s.scenario_id;
  v.category = s.category;
  v.completion = in.completion;
  v.completion_time = in.completion_time;
  const auto frames = group_frames(*in.log);
  const double dt = frame_dt(frames, in.dt);
  v.findings = all_findings(frames, dt, s.road_speed_limit, th, es, light_context(s));
  apply_annotations(v, annotations);
  return v;
}

inline Verdict evaluate(const RunResult& run, const Scenario& s, const Thresholds& th,
                        const std::vector<Annotation>& annotations = {}, const std::string& test_case_id = {},
                        const EvalSettings& es = {}) {
  return evaluate(EvalInput{test_case_id, &run.log, run.completion, run.completion_time, run.dt}, s, th, annotations,
                  es);
}

inline nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : v.findings) findings.push_back(finding_to_json(f));
  return {{"test_case_id", v.test_case_id},
          {"scenario_id", v.scenario_id},
          {"category", enum_name(kCategoryNames, v.category)},
          {"outcome", to_string(v.outcome)},
          {"completion", to_string(v.completion)},
          {"completion_time", v.completion_time ? nlohmann::json(*v.completion_time) : nlohmann::json(nullptr)},
          {"forced", v.forced},
          {"findings", findings},
          {"notes", v.notes}};
}

inline Verdict verdict_from_json(const nlohmann::json& j) {
  try {
    Verdict v;
    v.test_case_id = j.at("test_case_id").get<std::string>();
    v.scenario_id = j.value("scenario_id", v.test_case_id);
    auto cat = enum_from(kCategoryNames, j.at("category").get<std::string>());
    if (!cat) throw SchemaError("category", "unknown category");
    v.category = *cat;
    auto out = outcome_from(j.at("outcome").get<std::string>());
    if (!out) throw SchemaError("outcome", "unknown outcome");
    v.outcome = *out;
    auto comp = completion_from(j.at("completion").get<std::string>());
    if (!comp) throw SchemaError("completion", "unknown completion");
    v.completion = *comp;
    if (j.contains("completion_time") && !j.at("completion_time").is_null())
      v.completion_time = j.at("completion_time").get<double>();
    v.forced = j.value("forced", false);
    for (const auto& f : j.value("findings", nlohmann::json::array())) v.findings.push_back(finding_from_json(f));
    v.notes = j.value("notes", std::vector<std::string>{});
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("verdict", e.what());
  }
}

}  // namespace vista
