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


// Evaluation tasks in a 6 x 6 m room centred on the origin.
//
// Pick tables stand along one wall and place tables along another; doors
// and drawers sit in the walls. All scripted motions face into the wall,
// with the gripper's local x axis as the approach direction.

#ifndef KINFEAS_TASKS_HPP_
#define KINFEAS_TASKS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "kinfeas/env.hpp"
#include "kinfeas/rng.hpp"
#include "kinfeas/robot.hpp"

namespace kinfeas {

inline constexpr double kRoomHalfExtent = 3.0;

enum class TaskKind { kGoalReaching, kPickPlace, kDoor, kDrawer, kRecorded };
enum class GoalSource { kRandom, kWaypointPlan, kRecorded };

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::kGoalReaching;
  bool restricted = false;
  int episodes = 50;
  int eval_fail_cap = 99;
  Interval goal_distance{1.0, 5.0};   // goal reaching only
  std::filesystem::path recorded_path;  // kRecorded only

  GoalSource source() const;
  // Throws ConfigError when episodes <= 0 or a recorded task lacks a file.
  void validate() const;
};

// "ggr", "ggr-restr", "pick&place", "door", "drawer", or "recorded:<path>".
TaskSpec task_by_name(const std::string& name);
std::vector<std::string> standard_task_names();

// Scripted-motion parameters.
inline constexpr double kPickPlaceOffset = 0.15;  // m
inline constexpr double kDoorRadius = 0.4;        // m
inline constexpr double kDoorSweep = kPi / 2.0;   // rad
inline constexpr double kDrawerPull = 0.3;        // m

// Samples the start state and the end-effector motion for one episode.
EpisodeSetup make_episode(const RobotModel& model, const EnvConfig& config, const TaskSpec& task,
                          Rng& rng);

}  // namespace kinfeas

#endif  // KINFEAS_TASKS_HPP_
