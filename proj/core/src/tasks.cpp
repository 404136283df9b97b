// Copyright 2026 The Kinfeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "kinfeas/tasks.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "kinfeas/error.hpp"
#include "kinfeas/motion.hpp"

namespace kinfeas {
namespace {

// Distance from the room centre to table edges and wall fixtures.
constexpr double kTableDepth = 2.4;
constexpr double kFixtureDepth = 2.35;
constexpr double kWallSpan = 1.5;
constexpr double kStartHalfExtent = 0.75;

struct Wall {
  Vec3 normal;   // points from the room centre toward the wall
  Vec3 tangent;
  double yaw;    // yaw of a frame whose x axis is `normal`
};

Wall wall(std::uint64_t index) {
  const double yaw = 0.5 * kPi * static_cast<double>(index % 4);
  const Vec3 n(std::cos(yaw), std::sin(yaw), 0.0);
  return {n, Vec3(-n.y(), n.x(), 0.0), yaw};
}

Interval intersect(const Interval& a, const Interval& b) {
  const Interval out{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  return out.lo <= out.hi ? out : a;
}

// Pose on wall `w` at `depth`, facing the wall.
Pose wall_pose(Rng& rng, const Wall& w, double depth, double span, const Interval& heights) {
  const double along = rng.uniform(-span, span);
  Vec3 p = depth * w.normal + along * w.tangent;
  p.z() = rng.uniform(heights.lo, heights.hi);
  return {p, Quat::from_yaw(w.yaw)};
}

struct Start {
  BaseState base;
  JointConfig q;
  Pose ee;
};

Start sample_scripted_start(const RobotModel& model, Rng& rng, const Pose& first_target) {
  const double x = rng.uniform(-kStartHalfExtent, kStartHalfExtent);
  const double y = rng.uniform(-kStartHalfExtent, kStartHalfExtent);
  Start s;
  s.base = sample_start_at(rng, x, y, first_target);
  s.q = sample_start_config(model, rng, s.base, model.restr_height_range);
  s.ee = forward_kinematics(model, s.base.pose(), s.q);
  return s;
}

EpisodeSetup pick_place(const RobotModel& model, const EnvConfig& config, Rng& rng) {
  const std::uint64_t pick_wall = rng.below(4);
  const std::uint64_t place_wall = (pick_wall + 1 + rng.below(3)) % 4;
  const Interval tables = intersect({0.5, 0.9}, model.restr_height_range);
  const Pose object = wall_pose(rng, wall(pick_wall), kTableDepth, kWallSpan, tables);
  const Pose place = wall_pose(rng, wall(place_wall), kTableDepth, kWallSpan, tables);
  WaypointPlan plan = make_pick_place_plan(object, place, kPickPlaceOffset);
  Start s = sample_scripted_start(model, rng, plan.waypoints.front());
  return {s.base, std::move(s.q), MotionGenerator::along_plan(s.ee, std::move(plan), config.motion)};
}

Pose sample_handle(const RobotModel& model, Rng& rng, const Interval& heights) {
  Pose handle = wall_pose(rng, wall(rng.below(4)), kFixtureDepth, 1.2, intersect(heights, model.restr_height_range));
  // Rolling the gripper by pi flips which side the hinge is on.
  if (rng.below(2) == 1) handle.orientation = handle.orientation * Quat::from_axis_angle(Vec3::UnitX(), kPi);
  return handle;
}

EpisodeSetup door(const RobotModel& model, const EnvConfig& config, Rng& rng) {
  const Pose handle = sample_handle(model, rng, {0.8, 1.0});
  // Keeps the door's angular rate within the rotation cap.
  const double speed = rng.uniform(0.75, 1.0) * config.motion.max_ang_vel * kDoorRadius;
  Start s = sample_scripted_start(model, rng, handle);
  Trajectory traj = make_arc_trajectory(s.ee, handle, kDoorRadius, kDoorSweep, speed, config.motion);
  return {s.base, std::move(s.q), MotionGenerator::playback(std::move(traj))};
}

EpisodeSetup drawer(const RobotModel& model, const EnvConfig& config, Rng& rng) {
  const Pose handle = sample_handle(model, rng, {0.5, 0.9});
  const double speed = rng.uniform(0.03, 0.05);
  Start s = sample_scripted_start(model, rng, handle);
  Trajectory traj = make_pull_trajectory(s.ee, handle, kDrawerPull, speed, config.motion);
  return {s.base, std::move(s.q), MotionGenerator::playback(std::move(traj))};
}

EpisodeSetup recorded(const RobotModel& model, const EnvConfig& config, const TaskSpec& task, Rng& rng) {
  Trajectory rec = read_trajectory_jsonl(task.recorded_path);
  if (rec.poses.empty()) throw ConfigError("recorded trajectory '" + task.recorded_path.string() + "' has no poses");
  Start s = sample_scripted_start(model, rng, rec.poses.front());
  // Lead in from the start pose to the first recorded pose at the speed cap.
  Trajectory traj{rec.dt, approach_segment(s.ee, rec.poses.front(), config.motion.max_lin_vel,
                                           config.motion.max_ang_vel, rec.dt)};
  traj.poses.insert(traj.poses.end(), rec.poses.begin() + 1, rec.poses.end());
  return {s.base, std::move(s.q), MotionGenerator::playback(std::move(traj))};
}

}  // namespace

GoalSource TaskSpec::source() const {
  switch (kind) {
    case TaskKind::kGoalReaching:
      return GoalSource::kRandom;
    case TaskKind::kPickPlace:
      return GoalSource::kWaypointPlan;
    default:
      return GoalSource::kRecorded;
  }
}

void TaskSpec::validate() const {
  if (episodes <= 0) throw ConfigError("task '" + name + "' needs a positive episode count");
  if (eval_fail_cap < 0) throw ConfigError("task '" + name + "' has a negative failure cap");
  if (kind == TaskKind::kRecorded && recorded_path.empty()) {
    throw ConfigError("recorded task needs a trajectory file");
  }
  if (kind == TaskKind::kGoalReaching && !(goal_distance.lo > 0.0 && goal_distance.lo <= goal_distance.hi)) {
    throw ConfigError("task '" + name + "' has an invalid goal distance range");
  }
}

TaskSpec task_by_name(const std::string& name) {
  TaskSpec t;
  t.name = name;
  if (name == "ggr") {
    t.kind = TaskKind::kGoalReaching;
  } else if (name == "ggr-restr") {
    t.kind = TaskKind::kGoalReaching;
    t.restricted = true;
  } else if (name == "pick&place") {
    t.kind = TaskKind::kPickPlace;
  } else if (name == "door") {
    t.kind = TaskKind::kDoor;
  } else if (name == "drawer") {
    t.kind = TaskKind::kDrawer;
  } else if (name.rfind("recorded:", 0) == 0) {
    t.kind = TaskKind::kRecorded;
    t.recorded_path = name.substr(9);
  } else {
    throw ConfigError("unknown task '" + name + "'");
  }
  t.validate();
  return t;
}

std::vector<std::string> standard_task_names() {
  return {"ggr", "ggr-restr", "pick&place", "door", "drawer"};
}

EpisodeSetup make_episode(const RobotModel& model, const EnvConfig& config, const TaskSpec& task,
                          Rng& rng) {
  switch (task.kind) {
    case TaskKind::kGoalReaching:
      return make_goal_reaching_episode(model, config, {task.restricted, task.goal_distance}, rng);
    case TaskKind::kPickPlace:
      return pick_place(model, config, rng);
    case TaskKind::kDoor:
      return door(model, config, rng);
    case TaskKind::kDrawer:
      return drawer(model, config, rng);
    case TaskKind::kRecorded:
      return recorded(model, config, task, rng);
  }
  throw ContractError("unhandled task kind");
}

}  // namespace kinfeas
