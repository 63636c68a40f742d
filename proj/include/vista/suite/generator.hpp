#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vista/error.hpp"
#include "vista/scenario/json_io.hpp"
#include "vista/scenario/validate.hpp"
#include "vista/suite/param_value.hpp"
#include "vista/suite/rng.hpp"

namespace vista {

struct ManifestEntry {
  std::string test_case_id;
  // Binding path -> sampled value, for every distribution-valued parameter.
  std::map<std::string, double> bindings;
  std::string scenario_file;  // relative to the suite directory
  bool valid = true;
  std::vector<Violation> violations;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct SuiteManifest {
  std::string suite_id;
  std::string template_id;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;
  friend bool operator==(const SuiteManifest&, const SuiteManifest&) = default;
};

struct Suite {
  std::vector<Scenario> scenarios;
  SuiteManifest manifest;
};

inline std::string test_case_id(const std::string& template_id, std::size_t index) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04zu", index);
  return template_id + "_" + buf;
}

namespace detail {

inline double bind_param(ParamValue& p, const std::string& path, Xoshiro256& rng, std::map<std::string, double>& out) {
  if (p.is_literal()) return p.literal();
  const double v = sample_param(p, rng);
  out[path] = v;
  p = v;
  return v;
}

// Samples every parameter of `s` in document order: per actor, the trigger
// first, then maneuvers in order with parameters in key order.
inline std::map<std::string, double> concretize(Scenario& s, Xoshiro256& rng) {
  std::map<std::string, double> bindings;
  for (auto& a : s.actors) {
    const std::string base = a.actor_id;
    if (a.trigger.kind == TriggerKind::at_time) bind_param(a.trigger.time, base + ".trigger.time", rng, bindings);
    if (a.trigger.kind == TriggerKind::ego_within_radius)
      bind_param(a.trigger.radius, base + ".trigger.radius", rng, bindings);
    for (std::size_t j = 0; j < a.maneuvers.size(); ++j)
      for (auto& [key, value] : a.maneuvers[j].params)
        bind_param(value, base + ".maneuvers[" + std::to_string(j) + "]." + key, rng, bindings);
  }
  return bindings;
}

}  // namespace detail

/// One concrete test case: entry `index` of the suite seeded with `seed`.
/// Depends only on (template, seed, index), never on the suite size.
inline std::pair<Scenario, ManifestEntry> generate_entry(const Scenario& tmpl, std::uint64_t seed, std::size_t index) {
  Xoshiro256 rng = Xoshiro256::for_entry(seed, index);
  Scenario s = tmpl;
  ManifestEntry e;
  e.test_case_id = test_case_id(tmpl.scenario_id, index);
  e.bindings = detail::concretize(s, rng);
  s.scenario_id = e.test_case_id;
  e.scenario_file = e.test_case_id + ".json";
  e.violations = validate_scenario(s);
  e.valid = e.violations.empty();
  return {std::move(s), std::move(e)};
}

/// Fans a template out into `n` test cases. Variants that break an invariant
/// after sampling are kept and flagged invalid in the manifest.
inline Suite generate_suite(const Scenario& tmpl, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidParams("generate_suite: n must be >= 1");
  if (auto v = validate_scenario(tmpl, {.allow_distributions = true}); !v.empty())
    throw ValidationError(v.front().rule, "template: " + v.front().message);
  Suite suite;
  suite.manifest.template_id = tmpl.scenario_id;
  suite.manifest.seed = seed;
  suite.manifest.suite_id = tmpl.scenario_id + "-seed" + std::to_string(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto [s, e] = generate_entry(tmpl, seed, i);
    suite.scenarios.push_back(std::move(s));
    suite.manifest.entries.push_back(std::move(e));
  }
  return suite;
}

inline Json manifest_to_json(const SuiteManifest& m) {
  Json entries = Json::array();
  for (const auto& e : m.entries) {
    Json violations = Json::array();
    for (const auto& v : e.violations) violations.push_back(Json{{"rule", v.rule}, {"message", v.message}});
    Json bindings = Json::object();
    for (const auto& [k, v] : e.bindings) bindings[k] = v;
    entries.push_back(Json{{"test_case_id", e.test_case_id},
                           {"bindings", bindings},
                           {"scenario_file", e.scenario_file},
                           {"valid", e.valid},
                           {"violations", violations}});
  }
  return Json{{"suite_id", m.suite_id},
              {"template_id", m.template_id},
              {"seed", m.seed},
              {"prng", "xoshiro256** seeded by splitmix64; entry i uses splitmix64(seed ^ splitmix64(i))"},
              {"n", m.entries.size()},
              {"entries", entries}};
}

inline SuiteManifest manifest_from_json(const Json& j) {
  SuiteManifest m;
  try {
    m.suite_id = j.at("suite_id").get<std::string>();
    m.template_id = j.at("template_id").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& ej : j.at("entries")) {
      ManifestEntry e;
      e.test_case_id = ej.at("test_case_id").get<std::string>();
      e.scenario_file = ej.at("scenario_file").get<std::string>();
      e.valid = ej.at("valid").get<bool>();
      for (const auto& [k, v] : ej.at("bindings").items()) e.bindings[k] = v.get<double>();
      for (const auto& vj : ej.at("violations"))
        e.violations.push_back({vj.at("rule").get<std::string>(), vj.at("message").get<std::string>()});
      m.entries.push_back(std::move(e));
    }
  } catch (const Json::exception& e) {
    throw SchemaError("manifest", e.what());
  }
  return m;
}

/// Writes manifest.json plus one scenario file per entry into `dir`.
inline void write_suite(const std::filesystem::path& dir, const Suite& suite) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < suite.scenarios.size(); ++i)
    util::write_file(dir / suite.manifest.entries[i].scenario_file, serialize_scenario(suite.scenarios[i]));
  util::write_file(dir / "manifest.json", manifest_to_json(suite.manifest).dump(2) + "\n");
}

}  // namespace vista
