#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vista/cli/config.hpp"
#include "vista/eval/verdict.hpp"
#include "vista/report/report.hpp"
#include "vista/scenario/json_io.hpp"
#include "vista/scenario/validate.hpp"
#include "vista/sim/harness.hpp"
#include "vista/suite/generator.hpp"
#include "vista/util/io.hpp"

namespace vista::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

// A test case scheduled for simulation.
struct Job {
  std::string test_case_id;
  fs::path scenario_file;
};

namespace detail {

inline std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("VISTA_SEED");
  if (!v || !*v) return std::nullopt;
  auto s = parse_u64(v);
  if (!s) throw InvalidParams(std::string("VISTA_SEED is not a non-negative integer: '") + v + "'");
  return s;
}

inline Thresholds load_thresholds(const std::optional<fs::path>& file) {
  if (!file) return {};
  try {
    return thresholds_from_json(nlohmann::json::parse(util::read_file(*file)));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(file->string(), e.what());
  }
}

inline nlohmann::json read_json(const fs::path& file) {
  try {
    return nlohmann::json::parse(util::read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(file.string(), e.what());
  }
}

// Subdirectories or files of `dir` in name order, so output never depends on
// directory iteration order.
inline std::vector<fs::path> sorted_entries(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Runs f(i) for i in [0, n) on up to `jobs` threads. The first exception is rethrown.
template <typename F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Collects the test cases behind a scenario file, a generated suite
/// directory or a directory of scenario files. Suite entries flagged invalid
/// are returned in `skipped`.
inline std::vector<Job> collect_jobs(const fs::path& input, std::vector<std::string>& skipped) {
  if (fs::is_directory(input)) {
    const fs::path manifest_file = input / "manifest.json";
    if (!fs::exists(manifest_file)) {
      // A plain directory of scenario files, e.g. the shipped corpus.
      std::vector<Job> jobs;
      for (const fs::path& f : detail::sorted_entries(input))
        if (fs::is_regular_file(f) && f.extension() == ".json") jobs.push_back({load_scenario(f).scenario_id, f});
      if (jobs.empty()) throw IoError("no manifest.json or scenario files in " + input.string());
      return jobs;
    }
    const SuiteManifest m = manifest_from_json(detail::read_json(manifest_file));
    std::vector<Job> jobs;
    for (const auto& e : m.entries) {
      if (!e.valid) {
        skipped.push_back(e.test_case_id);
        continue;
      }
      jobs.push_back({e.test_case_id, input / e.scenario_file});
    }
    return jobs;
  }
  const Scenario s = load_scenario(input);
  return {{s.scenario_id, input}};
}

/// Simulates one test case and writes scenario.json, log.csv and run.json
/// into out/<test_case_id>/.
inline RunResult run_job(const Job& job, const std::string& policy_name, const SimConfig& cfg, const fs::path& out) {
  const Scenario s = load_scenario(job.scenario_file);
  auto policy = make_policy(policy_name);
  RunResult r = run_scenario(s, *policy, cfg);
  const fs::path dir = out / job.test_case_id;
  util::write_file(dir / "scenario.json", serialize_scenario(s));
  util::write_file(dir / "log.csv", write_log_csv(r.log));
  nlohmann::json meta = run_metadata(r, s, policy_name);
  meta["test_case_id"] = job.test_case_id;
  util::write_file(dir / "run.json", meta.dump(2) + "\n");
  return r;
}

/// Evaluates every out/<test_case_id>/ directory that holds a run.json.
inline std::vector<Verdict> evaluate_results(const fs::path& results, const Thresholds& th,
                                             const std::vector<Annotation>& annotations, const EvalSettings& es) {
  std::vector<Verdict> verdicts;
  for (const fs::path& dir : detail::sorted_entries(results)) {
    if (!fs::is_directory(dir) || !fs::exists(dir / "run.json")) continue;
    const nlohmann::json meta = detail::read_json(dir / "run.json");
    const Scenario s = load_scenario(dir / "scenario.json");
    const SimLog log = parse_log(util::read_file(dir / "log.csv"));
    EvalInput in;
    try {
      in.test_case_id = meta.value("test_case_id", dir.filename().string());
      auto c = completion_from(meta.at("completion").get<std::string>());
      if (!c) throw SchemaError("completion", "unknown value");
      in.completion = *c;
      if (!meta.at("completion_time").is_null()) in.completion_time = meta.at("completion_time").get<double>();
      in.dt = meta.value("dt", 0.1);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError((dir / "run.json").string(), e.what());
    }
    in.log = &log;
    Verdict v = evaluate(in, s, th, annotations, es);
    if (const auto err = meta.value("error", std::string{}); !err.empty()) v.notes.insert(v.notes.begin(), err);
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

inline std::vector<Verdict> load_verdicts(const fs::path& dir) {
  std::vector<Verdict> out;
  for (const fs::path& f : detail::sorted_entries(dir))
    if (f.extension() == ".json") out.push_back(verdict_from_json(detail::read_json(f)));
  return out;
}

/// Entry point of the `vista` tool. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"vista: scenario-based test runner for driving stacks"};
  app.require_subcommand(1);
  std::optional<fs::path> config_file;
  app.add_option("--config", config_file, "defaults file (key = value); ./vista.toml is used when present");

  // validate
  auto* validate = app.add_subcommand("validate", "check a scenario or template file");
  fs::path validate_file;
  bool validate_template = false;
  validate->add_option("scenario", validate_file, "scenario JSON")->required();
  validate->add_flag("--template", validate_template, "allow parameter distributions");

  // generate
  auto* generate = app.add_subcommand("generate", "sample a test suite from a template");
  fs::path gen_template, gen_out;
  std::size_t gen_n = 1;
  std::optional<std::uint64_t> gen_seed;
  generate->add_option("template", gen_template, "template JSON")->required();
  generate->add_option("-n", gen_n, "number of test cases")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen_seed, "PRNG seed (overrides VISTA_SEED)");
  generate->add_option("-o,--out", gen_out, "suite directory")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario file or a suite directory");
  fs::path run_input, run_out;
  std::optional<std::string> run_policy;
  std::optional<double> run_dt;
  std::optional<std::size_t> run_jobs;
  std::optional<fs::path> run_thresholds;
  bool run_gate = false;
  run_cmd->add_option("input", run_input, "scenario JSON or suite directory")->required();
  run_cmd->add_option("--policy", run_policy, "ego policy")->check(CLI::IsMember(builtin_policies()));
  run_cmd->add_option("--dt", run_dt, "simulation step [s]")->check(CLI::PositiveNumber);
  run_cmd->add_option("-o,--out", run_out, "results directory")->required();
  run_cmd->add_option("--jobs", run_jobs, "parallel runs")->check(CLI::PositiveNumber);
  run_cmd->add_option("--thresholds", run_thresholds, "thresholds JSON (used by --gate)");
  run_cmd->add_flag("--gate", run_gate, "evaluate the runs and exit 1 if any test case fails");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score simulation results");
  fs::path eval_input, eval_out;
  std::optional<fs::path> eval_thresholds, eval_annotations;
  std::string gap_divisor = "sum";
  bool eval_gate = false;
  eval_cmd->add_option("results", eval_input, "results directory from `run`")->required();
  eval_cmd->add_option("--thresholds", eval_thresholds, "thresholds JSON");
  eval_cmd->add_option("--annotations", eval_annotations, "manual annotations JSON");
  eval_cmd->add_option("--gap-divisor", gap_divisor, "temporal gap divisor")->check(CLI::IsMember({"sum", "ego"}));
  eval_cmd->add_option("-o,--out", eval_out, "verdicts directory")->required();
  eval_cmd->add_flag("--gate", eval_gate, "exit 1 if any verdict is FAIL");

  // report
  auto* report_cmd = app.add_subcommand("report", "aggregate verdicts into a suite report");
  fs::path report_input, report_out;
  bool report_gate = false;
  report_cmd->add_option("verdicts", report_input, "verdicts directory from `evaluate`")->required();
  report_cmd->add_option("-o,--out", report_out, "report directory")->required();
  report_cmd->add_flag("--gate", report_gate, "exit 1 if any verdict is FAIL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto any_fail = [](const std::vector<Verdict>& vs) {
    return std::any_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.outcome == Outcome::FAIL; });
  };

  try {
    Config cfg;
    if (config_file) cfg = load_config(*config_file);
    else if (fs::exists("vista.toml")) cfg = load_config("vista.toml");

    if (*validate) {
      const Scenario s = parse_scenario(util::read_file(validate_file),
                                        {validate_file.parent_path(), validate_template});
      out << "ok " << s.scenario_id << "\n";
      return kOk;
    }

    if (*generate) {
      std::uint64_t seed = 0;
      if (gen_seed) seed = *gen_seed;
      else if (auto s = detail::env_seed()) seed = *s;
      else if (cfg.seed) seed = *cfg.seed;
      const Scenario tmpl = load_scenario(gen_template, /*allow_distributions=*/true);
      const Suite suite = generate_suite(tmpl, gen_n, seed);
      write_suite(gen_out, suite);
      std::size_t invalid = 0;
      for (const auto& e : suite.manifest.entries) invalid += e.valid ? 0 : 1;
      out << "generated " << suite.manifest.entries.size() << " test cases (" << invalid << " invalid) seed "
          << seed << " -> " << gen_out.string() << "\n";
      return kOk;
    }

    if (*run_cmd) {
      SimConfig sim;
      sim.dt = run_dt.value_or(cfg.dt.value_or(sim.dt));
      const std::string policy = run_policy.value_or(cfg.policy.value_or("braking_follower"));
      make_policy(policy);  // reject unknown names from the config file early
      std::vector<std::string> skipped;
      const std::vector<Job> jobs = collect_jobs(run_input, skipped);
      std::vector<RunResult> results(jobs.size());
      detail::parallel_for(jobs.size(), run_jobs.value_or(cfg.jobs.value_or(1)),
                           [&](std::size_t i) { results[i] = run_job(jobs[i], policy, sim, run_out); });
      if (!skipped.empty()) util::write_file(run_out / "skipped.json", nlohmann::json(skipped).dump(2) + "\n");
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        out << jobs[i].test_case_id << " " << to_string(results[i].completion);
        if (results[i].completion_time) out << " t=" << util::format_double(*results[i].completion_time);
        if (!results[i].error.empty()) out << " error: " << results[i].error;
        out << "\n";
      }
      for (const auto& id : skipped) out << id << " skipped (invalid variant)\n";
      if (run_gate) {
        const Thresholds th = detail::load_thresholds(run_thresholds ? run_thresholds : cfg.thresholds);
        return any_fail(evaluate_results(run_out, th, {}, {})) ? kFailed : kOk;
      }
      return kOk;
    }

    if (*eval_cmd) {
      const Thresholds th = detail::load_thresholds(eval_thresholds ? eval_thresholds : cfg.thresholds);
      std::vector<Annotation> annotations;
      if (eval_annotations) annotations = parse_annotations(detail::read_json(*eval_annotations));
      EvalSettings es;
      es.gap_divisor = gap_divisor == "ego" ? GapDivisor::ego_only : GapDivisor::speed_sum;
      const auto verdicts = evaluate_results(eval_input, th, annotations, es);
      for (const auto& v : verdicts) {
        util::write_file(eval_out / (v.test_case_id + ".json"), verdict_to_json(v).dump(2) + "\n");
        out << v.test_case_id << " " << to_string(v.outcome) << " (" << v.findings.size() << " findings)\n";
      }
      return eval_gate && any_fail(verdicts) ? kFailed : kOk;
    }

    if (*report_cmd) {
      const auto verdicts = load_verdicts(report_input);
      const SuiteReport r = build_report(verdicts);
      util::write_file(report_out / "report.json", report_to_json(r).dump(2) + "\n");
      util::write_file(report_out / "histogram.csv", histogram_csv(r));
      const std::string text = report_text(r);
      util::write_file(report_out / "report.txt", text);
      out << text;
      return report_gate && any_fail(verdicts) ? kFailed : kOk;
    }
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return *validate ? kFailed : kUsage;
  } catch (const SchemaError& e) {
    err << "invalid: " << e.what() << "\n";
    return *validate ? kFailed : kUsage;
  } catch (const UnsupportedManeuver& e) {
    err << "invalid: " << e.what() << "\n";
    return *validate ? kFailed : kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace vista::cli
