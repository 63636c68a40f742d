#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vista/eval/verdict.hpp"
#include "vista/util/io.hpp"

namespace vista {

struct ReportRow {
  std::string test_case_id;
  Category category = Category::basic_functional;
  Outcome outcome = Outcome::PASS;
  std::map<std::string, int> finding_counts;  // by metric_id
  Completion completion = Completion::timed_out;
  std::optional<double> completion_time;
  bool forced = false;
};

/// One distinct failure pattern across FAIL verdicts.
struct Issue {
  std::string metric_id;
  std::string subject;
  std::vector<std::string> test_case_ids;
};

struct OutcomeCounts {
  int pass = 0;
  int pass_nc = 0;
  int fail = 0;
  int total() const { return pass + pass_nc + fail; }
  void add(Outcome o) {
    if (o == Outcome::PASS) ++pass;
    else if (o == Outcome::PASS_NC) ++pass_nc;
    else ++fail;
  }
  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;
};

struct SuiteReport {
  std::vector<ReportRow> rows;                   // sorted by test_case_id
  std::map<Category, OutcomeCounts> histogram;   // every category present, possibly zero
  std::vector<Issue> issues;                     // sorted by (metric_id, subject)

  OutcomeCounts totals() const {
    OutcomeCounts t;
    for (const auto& [_, c] : histogram) {
      t.pass += c.pass;
      t.pass_nc += c.pass_nc;
      t.fail += c.fail;
    }
    return t;
  }
};

/// Order-independent reduction of verdicts into rows, per-category counts and
/// an issue list. A timed-out FAIL contributes a ("timeout", "ego") issue.
inline SuiteReport build_report(std::vector<Verdict> verdicts) {
  std::sort(verdicts.begin(), verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.test_case_id < b.test_case_id; });
  SuiteReport r;
  for (const auto& [cat, _] : kCategoryNames) r.histogram[cat] = {};
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> issues;
  for (const auto& v : verdicts) {
    ReportRow row{v.test_case_id, v.category, v.outcome, {}, v.completion, v.completion_time, v.forced};
    for (const auto& f : v.findings) ++row.finding_counts[f.metric_id];
    r.histogram[v.category].add(v.outcome);
    if (v.outcome == Outcome::FAIL) {
      auto note = [&](const std::string& metric, const std::string& subject) {
        auto& ids = issues[{metric, subject}];
        if (ids.empty() || ids.back() != v.test_case_id) ids.push_back(v.test_case_id);
      };
      for (const auto& f : v.findings) note(f.metric_id, f.subject);
      if (v.completion == Completion::timed_out) note("timeout", "ego");
    }
    r.rows.push_back(std::move(row));
  }
  for (auto& [key, ids] : issues) r.issues.push_back({key.first, key.second, std::move(ids)});
  return r;
}

inline nlohmann::json report_to_json(const SuiteReport& r) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"test_case_id", row.test_case_id},
                    {"category", enum_name(kCategoryNames, row.category)},
                    {"outcome", to_string(row.outcome)},
                    {"completion", to_string(row.completion)},
                    {"completion_time", row.completion_time ? json(*row.completion_time) : json(nullptr)},
                    {"finding_counts", row.finding_counts},
                    {"forced", row.forced}});
  json hist = json::array();
  for (const auto& [cat, c] : r.histogram)
    hist.push_back({{"category", enum_name(kCategoryNames, cat)},
                    {"PASS", c.pass},
                    {"PASS_NC", c.pass_nc},
                    {"FAIL", c.fail},
                    {"total", c.total()}});
  json issues = json::array();
  for (const auto& i : r.issues)
    issues.push_back({{"metric_id", i.metric_id}, {"subject", i.subject}, {"test_case_ids", i.test_case_ids}});
  const OutcomeCounts t = r.totals();
  return {{"tests", t.total()},
          {"totals", {{"PASS", t.pass}, {"PASS_NC", t.pass_nc}, {"FAIL", t.fail}}},
          {"histogram", hist},
          {"rows", rows},
          {"issues", issues}};
}

inline std::string histogram_csv(const SuiteReport& r) {
  std::string out = "category,PASS,PASS_NC,FAIL,total\n";
  for (const auto& [cat, c] : r.histogram) {
    out += std::string(enum_name(kCategoryNames, cat)) + "," + std::to_string(c.pass) + "," +
           std::to_string(c.pass_nc) + "," + std::to_string(c.fail) + "," + std::to_string(c.total()) + "\n";
  }
  return out;
}

/// Plain-text summary: histogram with bars, then the issue list.
inline std::string report_text(const SuiteReport& r) {
  std::string out;
  const OutcomeCounts t = r.totals();
  out += "tests: " + std::to_string(t.total()) + "  PASS " + std::to_string(t.pass) + "  PASS_NC " +
         std::to_string(t.pass_nc) + "  FAIL " + std::to_string(t.fail) + "\n\n";
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  for (const auto& [cat, c] : r.histogram) {
    out += pad(std::string(enum_name(kCategoryNames, cat)), 18);
    out += std::string(static_cast<std::size_t>(c.pass), '#') + std::string(static_cast<std::size_t>(c.pass_nc), '~') +
           std::string(static_cast<std::size_t>(c.fail), 'x');
    out += "  (" + std::to_string(c.pass) + "/" + std::to_string(c.pass_nc) + "/" + std::to_string(c.fail) + ")\n";
  }
  out += "\n# PASS  ~ PASS_NC  x FAIL\n";
  if (!r.issues.empty()) {
    out += "\nissues:\n";
    for (const auto& i : r.issues) {
      out += "  " + i.metric_id + " / " + i.subject + ":";
      for (const auto& id : i.test_case_ids) out += " " + id;
      out += "\n";
    }
  }
  return out;
}

}  // namespace vista
