#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "vista/report/report.hpp"

using namespace vista;

namespace {

Verdict verdict(const std::string& id, Category cat, Outcome o, std::vector<Finding> findings = {},
                Completion c = Completion::reached_destination) {
  Verdict v;
  v.test_case_id = id;
  v.scenario_id = id;
  v.category = cat;
  v.outcome = o;
  v.completion = c;
  if (c == Completion::reached_destination) v.completion_time = 10.0;
  v.findings = std::move(findings);
  return v;
}

Finding collision(const std::string& subject) { return {"collision", Severity::IF, 1.0, 1.1, subject, 0, 0, false}; }

std::vector<Verdict> mixed_suite() {
  return {verdict("A", Category::basic_functional, Outcome::PASS),
          verdict("B", Category::basic_functional, Outcome::PASS_NC,
                  {{"tailgating", Severity::NC, 1, 2, "lead", 0.5, 1.0, false}}),
          verdict("C", Category::negative, Outcome::FAIL, {collision("car_1")}),
          verdict("D", Category::negative, Outcome::FAIL, {collision("car_1")}),
          verdict("E", Category::regression, Outcome::FAIL, {}, Completion::timed_out),
          verdict("F", Category::environmental, Outcome::PASS)};
}

}  // namespace

TEST(Report, EmptySuite) {
  const SuiteReport r = build_report({});
  EXPECT_EQ(r.histogram.size(), kCategoryNames.size());
  for (const auto& [_, c] : r.histogram) EXPECT_EQ(c, OutcomeCounts{});
  EXPECT_EQ(r.totals(), OutcomeCounts{});
  EXPECT_TRUE(r.rows.empty());
  EXPECT_TRUE(r.issues.empty());
}

TEST(Report, CountsOutcomes) {
  std::vector<Verdict> v;
  for (const char* id : {"a", "b", "c"}) v.push_back(verdict(id, Category::basic_functional, Outcome::PASS));
  v.push_back(verdict("d", Category::basic_functional, Outcome::FAIL, {collision("x")}));
  const SuiteReport r = build_report(v);
  EXPECT_EQ(r.totals(), (OutcomeCounts{3, 0, 1}));
  EXPECT_EQ(r.histogram.at(Category::basic_functional), (OutcomeCounts{3, 0, 1}));
  EXPECT_EQ(r.histogram.at(Category::negative), OutcomeCounts{});
}

TEST(Report, ConservesVerdicts) {
  const auto suite = mixed_suite();
  const SuiteReport r = build_report(suite);
  EXPECT_EQ(r.totals().total(), static_cast<int>(suite.size()));
  EXPECT_EQ(r.rows.size(), suite.size());
  EXPECT_EQ(r.rows[1].finding_counts.at("tailgating"), 1);
}

TEST(Report, OrderIndependent) {
  auto suite = mixed_suite();
  const std::string reference = report_to_json(build_report(suite)).dump();
  std::mt19937 gen(3);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(suite.begin(), suite.end(), gen);
    EXPECT_EQ(report_to_json(build_report(suite)).dump(), reference);
  }
}

TEST(Report, IssuesGroupFailures) {
  const SuiteReport r = build_report(mixed_suite());
  ASSERT_EQ(r.issues.size(), 2u);
  EXPECT_EQ(r.issues[0].metric_id, "collision");
  EXPECT_EQ(r.issues[0].subject, "car_1");
  EXPECT_EQ(r.issues[0].test_case_ids, (std::vector<std::string>{"C", "D"}));
  EXPECT_EQ(r.issues[1].metric_id, "timeout");
  EXPECT_EQ(r.issues[1].subject, "ego");
  EXPECT_EQ(r.issues[1].test_case_ids, std::vector<std::string>{"E"});
}

TEST(Report, Renderings) {
  const SuiteReport r = build_report(mixed_suite());
  const std::string csv = histogram_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "category,PASS,PASS_NC,FAIL,total");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(kCategoryNames.size() + 1));
  EXPECT_NE(csv.find("negative,0,0,2,2\n"), std::string::npos);

  const auto j = report_to_json(r);
  EXPECT_EQ(j["tests"], 6);
  EXPECT_EQ(j["totals"]["FAIL"], 3);
  EXPECT_TRUE(j["rows"][4]["completion_time"].is_null());

  const std::string text = report_text(r);
  EXPECT_NE(text.find("tests: 6"), std::string::npos);
  EXPECT_NE(text.find("timeout / ego: E"), std::string::npos);
}
