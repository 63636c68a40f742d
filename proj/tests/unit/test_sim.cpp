#include <gtest/gtest.h>

#include <filesystem>

#include "vista/geometry/rect.hpp"
#include "vista/scenario/json_io.hpp"
#include "vista/sim/harness.hpp"

using namespace vista;

namespace {

Scenario open_road(double dest_x, double time_limit) {
  Scenario s;
  s.scenario_id = "T";
  s.map_id = "m";
  s.ego_destination = {dest_x, 0};
  s.time_limit = time_limit;
  return s;
}

// Straight-line ego under the default limits: +a_max*dt per step up to the
// cruise speed, position advanced with the new speed. Returns the first step
// whose position is within r_goal of the destination.
int closed_form_goal_step(double dest, double v_cruise = 10.0, double dv = 0.3, double dt = 0.1, double r = 3.0) {
  double v = 0.0, x = 0.0;
  for (int k = 1; k < 100000; ++k) {
    v = std::min(v + dv, v_cruise);
    x += v * dt;
    if (dest - x <= r) return k;
  }
  return -1;
}

std::vector<StepRecord> rows_of(const SimLog& log, const std::string& id) {
  std::vector<StepRecord> out;
  for (const auto& r : log)
    if (r.entity_id == id) out.push_back(r);
  return out;
}

class Throwing : public EgoPolicy {
 public:
  std::string name() const override { return "throwing"; }
  Command decide(const Observation& obs) override {
    if (obs.sim_time > 0.25) throw std::runtime_error("boom");
    return {1.0, 0.0};
  }
};

class Idle : public EgoPolicy {
 public:
  std::string name() const override { return "idle"; }
  Command decide(const Observation&) override { return {}; }
};

ActorSpec straight_car(const std::string& id, Pose2 start, double length, double speed) {
  ActorSpec a;
  a.actor_id = id;
  a.body = {4.5, 1.8};
  a.start_pose = start;
  a.maneuvers = {{L2Kind::drive_straight, {{"length", length}, {"speed", speed}}}};
  return a;
}

}  // namespace

TEST(Run, ReachesNearbyDestination) {
  WaypointFollower p;
  auto r = run_scenario(open_road(50, 20), p);
  ASSERT_EQ(r.completion, Completion::reached_destination);
  const int k = closed_form_goal_step(50);
  EXPECT_NEAR(*r.completion_time, k * 0.1, 1e-9);
  EXPECT_GE(*r.completion_time, 5.0);
  EXPECT_LE(*r.completion_time, 7.0);
  EXPECT_LE(distance(rows_of(r.log, "ego").back().position(), {50, 0}), 3.0);
}

TEST(Run, FreeDriveCorpusScenario) {
  Scenario s = load_scenario(std::filesystem::path(VISTA_SOURCE_DIR) / "corpus/scenarios/SV_001_free_drive.json");
  BrakingFollower p;
  auto r = run_scenario(s, p);
  ASSERT_EQ(r.completion, Completion::reached_destination);
  EXPECT_NEAR(*r.completion_time, closed_form_goal_step(120) * 0.1, 1e-9);
  EXPECT_NEAR(*r.completion_time, 13.4, 1e-9);
}

TEST(Run, TimesOut) {
  WaypointFollower p;
  auto r = run_scenario(open_road(1000, 1.0), p);
  EXPECT_EQ(r.completion, Completion::timed_out);
  EXPECT_FALSE(r.completion_time.has_value());
  EXPECT_EQ(r.steps, 10u);
  auto ego = rows_of(r.log, "ego");
  ASSERT_EQ(ego.size(), 11u);
  EXPECT_DOUBLE_EQ(ego.back().sim_time, 1.0);
}

TEST(Run, SimTimeIsStepTimesDt) {
  Scenario s = open_road(1000, 3.0);
  s.actors = {straight_car("c", {10, 3.5, 0}, 30, 5)};
  s.static_objects = {{"cone", StaticKind::cone, {30, -3, 0}, {0.4, 0.4}}};
  WaypointFollower p;
  auto r = run_scenario(s, p);
  for (const std::string id : {"ego", "c", "cone"}) {
    auto rows = rows_of(r.log, id);
    ASSERT_EQ(rows.size(), r.steps + 1) << id;
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].sim_time, static_cast<double>(i) * 0.1);
  }
}

TEST(Run, RadiusTriggerFiresOnFirstCloseStep) {
  Scenario s = open_road(200, 20);
  ActorSpec a = straight_car("c", {40, 3.5, 0}, 30, 5);
  a.trigger.kind = TriggerKind::ego_within_radius;
  a.trigger.radius = 15.0;
  s.actors = {a};
  WaypointFollower p;
  auto r = run_scenario(s, p);
  auto ego = rows_of(r.log, "ego");
  auto car = rows_of(r.log, "c");
  std::size_t first_close = ego.size();
  for (std::size_t k = 0; k < ego.size(); ++k)
    if (distance(ego[k].position(), car[k].position()) <= 15.0) {
      first_close = k;
      break;
    }
  ASSERT_LT(first_close + 1, ego.size());
  for (std::size_t k = 0; k <= first_close; ++k) EXPECT_EQ(car[k].pose(), a.start_pose);
  EXPECT_NE(car[first_close + 1].pose(), a.start_pose);
}

TEST(Run, ActorsReplayTheirTrajectoryExactly) {
  Scenario s = open_road(300, 15);
  ActorSpec a = straight_car("c", {10, 3.5, 0}, 20, 6);
  a.maneuvers.push_back({L2Kind::turn_left, {{"radius", 12.0}, {"speed", 4.0}}});
  a.trigger.kind = TriggerKind::at_time;
  a.trigger.time = 1.0;
  s.actors = {a};
  const TimedTrajectory traj = compile_actor(a, 0.1);
  WaypointFollower p;
  auto r = run_scenario(s, p);
  auto car = rows_of(r.log, "c");
  // Activation is evaluated against the state at t = 1.0, so playback sample j
  // is logged at row 10 + j.
  for (std::size_t k = 0; k < car.size(); ++k) {
    const Pose2 expect = k <= 10 ? a.start_pose : traj.at_step(k - 10).pose;
    EXPECT_EQ(car[k].pose(), expect) << "row " << k;
  }
  EXPECT_GT(car.size(), traj.samples.size() + 12);  // ran past the end: final pose held
  EXPECT_EQ(car.back().speed, 0.0);
}

TEST(Run, Deterministic) {
  Scenario s = open_road(150, 30);
  s.actors = {straight_car("c", {30, 0, 0}, 100, 6)};
  BrakingFollower p1, p2;
  EXPECT_EQ(run_scenario(s, p1).log, run_scenario(s, p2).log);
}

TEST(Run, PolicyFailureEndsRunAsTimeout) {
  Throwing p;
  auto r = run_scenario(open_road(100, 10), p);
  EXPECT_EQ(r.completion, Completion::timed_out);
  EXPECT_NE(r.error.find("boom"), std::string::npos);
  EXPECT_EQ(rows_of(r.log, "ego").size(), r.steps + 1);
  EXPECT_EQ(r.steps, 2u);
}

TEST(Step, IdleEgoStaysPut) {
  auto w = initial_state(CompiledScenario::compile(open_road(100, 10), 0.1));
  Idle p;
  auto n = step(w, p);
  EXPECT_EQ(n.ego.pose, w.ego.pose);
  EXPECT_EQ(n.step_count, 1u);
}

TEST(Step, LightScheduleAdvances) {
  Scenario s = open_road(100, 10);
  s.traffic_lights = {{"tl", {{50, -4}, {50, 4}}, {{LightState::green, 5}, {LightState::yellow, 2}, {LightState::red, 5}}}};
  auto w = initial_state(CompiledScenario::compile(s, 0.1));
  Idle p;
  for (int i = 0; i < 60; ++i) w = step(w, p);
  EXPECT_NEAR(w.sim_time(), 6.0, 1e-12);
  EXPECT_EQ(w.light_states[0], LightState::yellow);
}

TEST(Policy, BrakingFollowerStopsShortOfObstacle) {
  Scenario s = open_road(100, 20);
  // Cone whose near face is 5 m ahead of the ego's front bumper.
  s.static_objects = {{"cone", StaticKind::cone, {kDefaultEgoBody.length / 2 + 5.0 + 0.2, 0, 0}, {0.4, 0.4}}};
  BrakingFollower p;
  auto r = run_scenario(s, p);
  auto ego = rows_of(r.log, "ego");
  auto cone = rows_of(r.log, "cone");
  double min_gap = 1e9;
  for (std::size_t k = 0; k < ego.size(); ++k) min_gap = std::min(min_gap, rect_distance(ego[k].rect(), cone[k].rect()));
  EXPECT_GT(min_gap, 0.0);
  EXPECT_EQ(ego.back().speed, 0.0);
}

TEST(Policy, WaypointFollowerHitsObstacle) {
  Scenario s = open_road(100, 20);
  s.static_objects = {{"cone", StaticKind::cone, {kDefaultEgoBody.length / 2 + 5.0 + 0.2, 0, 0}, {0.4, 0.4}}};
  WaypointFollower p;
  auto r = run_scenario(s, p);
  auto ego = rows_of(r.log, "ego");
  auto cone = rows_of(r.log, "cone");
  bool hit = false;
  for (std::size_t k = 0; k < ego.size(); ++k) hit = hit || overlaps(ego[k].rect(), cone[k].rect());
  EXPECT_TRUE(hit);
}

TEST(Policy, BrakingFollowerHoldsAtRedLight) {
  Scenario s = open_road(100, 20);
  s.traffic_lights = {{"tl", {{30, -4}, {30, 4}}, {{LightState::red, 100}}}};
  BrakingFollower p;
  auto r = run_scenario(s, p);
  EXPECT_EQ(r.completion, Completion::timed_out);
  auto ego = rows_of(r.log, "ego");
  for (const auto& e : ego) EXPECT_LT(e.x + e.length / 2, 30.0);
  EXPECT_EQ(ego.back().speed, 0.0);
}

TEST(Policy, UnknownNameRejected) {
  EXPECT_THROW(make_policy("autopilot"), InvalidParams);
  for (const auto& n : builtin_policies()) EXPECT_EQ(make_policy(n)->name(), n);
}
