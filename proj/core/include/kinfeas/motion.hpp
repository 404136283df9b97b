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

// End-effector motion generators.
//
// Every generator is open loop: it advances its own desired pose and never
// looks at where the arm actually is, so the commanded end-effector path is
// independent of the base policy.

#ifndef KINFEAS_MOTION_HPP_
#define KINFEAS_MOTION_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

#include "kinfeas/spatial.hpp"

namespace kinfeas {

struct MotionLimits {
  double min_lin_vel = 0.01;  // m/s
  double max_lin_vel = 0.1;   // m/s
  double max_ang_vel = 0.1;   // rad/s
  double dt = 0.1;            // s
};

struct MotionState {
  Pose desired_pose;
  Pose goal;
  MotionLimits limits;
};

struct LdsStepResult {
  Twist twist;
  MotionState state;
};

// One step of the linear dynamic system: velocity is the remaining offset to
// the goal per step, clamped to the speed limits and never overshooting;
// orientation slerps toward the goal at a capped angular rate.
LdsStepResult lds_step(const MotionState& state);

struct WaypointPlan {
  std::vector<Pose> waypoints;
  double advance_tol = 0.025;  // m
  std::size_t current_index = 0;

  const Pose& current() const { return waypoints.at(current_index); }
  bool at_last() const { return current_index + 1 >= waypoints.size(); }
};

// Pre-grasp, grasp, pre-place, place. The pre-poses back off by
// `approach_offset` against each pose's approach axis (its local x axis).
WaypointPlan make_pick_place_plan(const Pose& object_pose, const Pose& place_pose,
                                  double approach_offset);

struct Trajectory {
  double dt = 0.1;
  std::vector<Pose> poses;
};

// Straight-line approach from `start` to `target` respecting the speed and
// rotation caps; includes both end points.
std::vector<Pose> approach_segment(const Pose& start, const Pose& target, double speed,
                                   double max_ang_vel, double dt);

// Approach from `start` to the handle, then swing the handle about a vertical
// hinge located `radius` along the handle's local y axis. The gripper turns
// with the door. Consecutive poses are at most speed*dt apart.
Trajectory make_arc_trajectory(const Pose& start, const Pose& handle_pose, double radius,
                               double sweep, double speed, const MotionLimits& limits);

// Approach from `start` to the handle, then pull `distance` against the
// handle's approach axis.
Trajectory make_pull_trajectory(const Pose& start, const Pose& handle_pose, double distance,
                                double speed, const MotionLimits& limits);

// Twist taking pose[index] exactly into pose[index + 1]; nullopt once the
// trajectory is exhausted.
std::optional<Twist> playback_step(const Trajectory& traj, std::size_t index);

// JSONL: header {"dt":..,"frame":"world"} followed by one pose array per line.
void write_trajectory_jsonl(const Trajectory& traj, const std::filesystem::path& path);
Trajectory read_trajectory_jsonl(const std::filesystem::path& path);

// Uniform step interface over the generator kinds the environment drives.
class MotionGenerator {
 public:
  struct Output {
    Pose desired;
    Twist twist;
  };

  static MotionGenerator to_goal(const Pose& start, const Pose& goal, const MotionLimits& limits);
  static MotionGenerator along_plan(const Pose& start, WaypointPlan plan,
                                    const MotionLimits& limits);
  static MotionGenerator playback(Trajectory traj);

  // Advances one step and returns the new desired pose and the twist that
  // produced it.
  Output advance();
  // The twist the next advance() will emit, without changing state.
  Twist peek() const;

  const Pose& desired() const;
  // Target the generator is currently heading for.
  const Pose& current_target() const;
  const Pose& final_goal() const;
  // True when current_target() is the final goal.
  bool heading_final() const;
  // True once no further motion will be commanded.
  bool finished() const;
  double dt() const { return dt_; }

 private:
  struct PlanState {
    MotionState motion;
    WaypointPlan plan;
  };
  struct PlaybackState {
    Trajectory traj;
    std::size_t index = 0;
  };

  std::variant<PlanState, PlaybackState> state_;
  double dt_ = 0.1;
};

}  // namespace kinfeas

#endif  // KINFEAS_MOTION_HPP_
