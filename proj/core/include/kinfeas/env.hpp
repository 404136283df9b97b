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

// Goal-conditioned base-control environment.
//
// Each step the end-effector generator proposes the next desired pose (open
// loop), the base moves under the agent's velocity command, and an IK solve
// from the current arm configuration decides whether the desired pose is
// kinematically feasible. The reward is
//   r = -[infeasible] - lambda * |a|^2  (- leeway penalty for leeway robots)
//
// Observation layout, all poses in the base frame, quaternions (w,x,y,z):
//   [ q (n) | ee pose (7) | next ee twist (7) | goal pose (7) ]

#ifndef KINFEAS_ENV_HPP_
#define KINFEAS_ENV_HPP_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "kinfeas/motion.hpp"
#include "kinfeas/rng.hpp"
#include "kinfeas/robot.hpp"
#include "kinfeas/spatial.hpp"

namespace kinfeas {

inline constexpr int kPoseSlots = 7;
inline constexpr int kObsExtra = 3 * kPoseSlots;  // 21

struct BaseState {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;  // (-pi, pi]

  Pose pose() const { return Pose::planar(x, y, yaw); }
  bool operator==(const BaseState&) const = default;
};

// Base velocity command in the body frame. Differential-drive robots must
// leave vy at zero.
struct Action {
  double vx = 0.0;     // m/s
  double vy = 0.0;     // m/s
  double omega = 0.0;  // rad/s

  double squared_norm() const { return vx * vx + vy * vy + omega * omega; }
  bool operator==(const Action&) const = default;
};

int action_dim(const RobotModel& model);
int observation_dim(const RobotModel& model);

// Maps a policy output in [-1, 1]^d onto the velocity caps.
Action action_from_normalized(const RobotModel& model, std::span<const double> a);
std::vector<double> normalized_from_action(const RobotModel& model, const Action& action);
bool within_caps(const RobotModel& model, const Action& action, double tol = 1e-9);
Action clamp_to_caps(const RobotModel& model, Action action);

BaseState integrate_base(const BaseState& base, const Action& action, double dt, BaseKind kind);

double compute_reward(const IkResult& ik, const Action& action, double lambda,
                      const RobotModel& model);

// Goal uniformly `distance` away (planar) from `center`, uniform bearing,
// height from the robot's goal (or restricted) range, uniform orientation.
Pose sample_goal(const RobotModel& model, Rng& rng, bool restricted, const Vec3& center,
                 const Interval& distance = {1.0, 5.0});

// Start anywhere in the centred square of half-width `half_extent`, facing
// within +-pi/2 of the bearing to `first_goal`.
BaseState sample_start(Rng& rng, const Pose& first_goal, double half_extent = 0.75);
BaseState sample_start_at(Rng& rng, double x, double y, const Pose& first_goal);

// Random joint configuration whose end-effector height lies in `heights`
// (rejection sampling; falls back to the last draw).
JointConfig sample_start_config(const RobotModel& model, Rng& rng, const BaseState& base,
                                const Interval& heights, int max_tries = 10000);

enum class EnvMode { kTrain, kEval };

struct EnvConfig {
  EnvMode mode = EnvMode::kTrain;
  double dt = 0.1;
  int step_cap = 2000;
  int train_fail_thresh = 19;
  int eval_fail_thresh = 99;
  double lambda = 0.01;
  double action_noise_std = 0.015;   // m/s, training only
  double success_pos_tol = 0.025;    // m
  double success_ang_tol = 5.0 * kPi / 180.0;
  IkOptions ik;
  MotionLimits motion;

  int fail_thresh() const { return mode == EnvMode::kTrain ? train_fail_thresh : eval_fail_thresh; }
};

struct EpisodeSetup {
  BaseState base;
  JointConfig q;
  MotionGenerator generator;
};

struct EnvState {
  Eigen::VectorXd obs;
  int ik_fail_count = 0;
  int step_count = 0;
};

struct StepInfo {
  bool ik_failed = false;
  double deviation = 0.0;      // m, desired vs achieved end-effector position
  double ang_deviation = 0.0;  // rad
  bool success = false;
  bool truncated = false;      // step cap hit
};

struct StepOutcome {
  EnvState state;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class Env {
 public:
  Env(RobotModel model, EnvConfig config);

  // `episode_rng` seeds the action-noise and IK-restart streams.
  void reset(EpisodeSetup setup, const Rng& episode_rng);

  EnvState observation() const;
  StepOutcome step(const Action& action);

  const RobotModel& model() const { return model_; }
  const EnvConfig& config() const { return config_; }
  void set_mode(EnvMode mode) { config_.mode = mode; }
  void set_eval_fail_thresh(int n) { config_.eval_fail_thresh = n; }

  const BaseState& base() const { return base_; }
  const JointConfig& q() const { return q_; }
  const Pose& ee_pose() const { return ee_; }
  const Pose& desired_pose() const;
  const Pose& final_goal() const;
  // World-frame twist the generator will command next.
  Twist next_twist_world() const;
  int ik_fail_count() const { return ik_fail_count_; }
  int step_count() const { return step_count_; }
  bool done() const { return done_; }
  bool active() const { return generator_.has_value(); }

 private:
  RobotModel model_;
  EnvConfig config_;

  BaseState base_;
  JointConfig q_;
  Pose ee_;
  std::optional<MotionGenerator> generator_;
  Rng noise_rng_;
  Rng ik_rng_;
  int ik_fail_count_ = 0;
  int step_count_ = 0;
  bool done_ = false;
};

// Observation for an arbitrary state; Env::observation() delegates here.
Eigen::VectorXd build_observation(const JointConfig& q, const Pose& ee_world,
                                  const Twist& next_twist_world, const Pose& goal_world,
                                  const Pose& base_pose);

struct GoalReachingOptions {
  bool restricted = false;
  Interval distance{1.0, 5.0};
};

// Random goal reaching episode (the training task).
EpisodeSetup make_goal_reaching_episode(const RobotModel& model, const EnvConfig& config,
                                        const GoalReachingOptions& options, Rng& rng);

}  // namespace kinfeas

#endif  // KINFEAS_ENV_HPP_
