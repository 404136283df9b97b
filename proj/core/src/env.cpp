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

#include "kinfeas/env.hpp"

#include <algorithm>
#include <cmath>

#include "kinfeas/error.hpp"

namespace kinfeas {

int action_dim(const RobotModel& model) { return model.base_kind == BaseKind::kOmni ? 3 : 2; }

int observation_dim(const RobotModel& model) { return model.dof() + kObsExtra; }

Action action_from_normalized(const RobotModel& model, std::span<const double> a) {
  if (static_cast<int>(a.size()) != action_dim(model)) {
    throw ContractError("normalized action has the wrong dimension");
  }
  const double lin = model.max_base_lin_vel;
  const double ang = model.max_base_ang_vel;
  if (model.base_kind == BaseKind::kOmni) return {a[0] * lin, a[1] * lin, a[2] * ang};
  return {a[0] * lin, 0.0, a[1] * ang};
}

std::vector<double> normalized_from_action(const RobotModel& model, const Action& action) {
  const double lin = model.max_base_lin_vel;
  const double ang = model.max_base_ang_vel;
  if (model.base_kind == BaseKind::kOmni) {
    return {action.vx / lin, action.vy / lin, action.omega / ang};
  }
  return {action.vx / lin, action.omega / ang};
}

bool within_caps(const RobotModel& model, const Action& action, double tol) {
  const double lin = model.max_base_lin_vel + tol;
  if (model.base_kind == BaseKind::kDiffDrive && action.vy != 0.0) return false;
  return std::abs(action.vx) <= lin && std::abs(action.vy) <= lin &&
         std::abs(action.omega) <= model.max_base_ang_vel + tol;
}

Action clamp_to_caps(const RobotModel& model, Action a) {
  const double lin = model.max_base_lin_vel;
  const double ang = model.max_base_ang_vel;
  a.vx = std::clamp(a.vx, -lin, lin);
  a.vy = model.base_kind == BaseKind::kOmni ? std::clamp(a.vy, -lin, lin) : 0.0;
  a.omega = std::clamp(a.omega, -ang, ang);
  return a;
}

BaseState integrate_base(const BaseState& base, const Action& action, double dt, BaseKind kind) {
  BaseState out = base;
  const double c = std::cos(base.yaw);
  const double s = std::sin(base.yaw);
  if (kind == BaseKind::kOmni) {
    out.x += (c * action.vx - s * action.vy) * dt;
    out.y += (s * action.vx + c * action.vy) * dt;
  } else if (std::abs(action.omega) < 1e-12) {
    out.x += c * action.vx * dt;
    out.y += s * action.vx * dt;
  } else {
    // Exact unicycle arc.
    const double r = action.vx / action.omega;
    const double yaw1 = base.yaw + action.omega * dt;
    out.x += r * (std::sin(yaw1) - s);
    out.y += r * (c - std::cos(yaw1));
  }
  out.yaw = wrap_angle(base.yaw + action.omega * dt);
  return out;
}

double compute_reward(const IkResult& ik, const Action& action, double lambda,
                      const RobotModel& model) {
  double r = (ik.feasible ? 0.0 : -1.0) - lambda * action.squared_norm();
  if (ik.feasible && model.has_leeway()) {
    double penalty = 0.0;
    if (model.pos_leeway > 0.0) penalty += ik.pos_err * ik.pos_err / (model.pos_leeway * model.pos_leeway);
    if (model.ang_leeway > 0.0) penalty += ik.ang_err * ik.ang_err / (model.ang_leeway * model.ang_leeway);
    r -= std::clamp(0.5 * penalty, 0.0, 1.0);
  }
  return r;
}

Pose sample_goal(const RobotModel& model, Rng& rng, bool restricted, const Vec3& center,
                 const Interval& distance) {
  const double d = rng.uniform(distance.lo, distance.hi);
  const double bearing = rng.uniform(0.0, 2.0 * kPi);
  const Interval& heights = restricted ? model.restr_height_range : model.goal_height_range;
  const double z = rng.uniform(heights.lo, heights.hi);
  const Quat q = rng.unit_quat();
  return {Vec3(center.x() + d * std::cos(bearing), center.y() + d * std::sin(bearing), z), q};
}

BaseState sample_start_at(Rng& rng, double x, double y, const Pose& first_goal) {
  const double bearing = std::atan2(first_goal.position.y() - y, first_goal.position.x() - x);
  return {x, y, wrap_angle(bearing + rng.uniform(-0.5 * kPi, 0.5 * kPi))};
}

BaseState sample_start(Rng& rng, const Pose& first_goal, double half_extent) {
  const double x = rng.uniform(-half_extent, half_extent);
  const double y = rng.uniform(-half_extent, half_extent);
  return sample_start_at(rng, x, y, first_goal);
}

JointConfig sample_start_config(const RobotModel& model, Rng& rng, const BaseState& base,
                                const Interval& heights, int max_tries) {
  const Pose bp = base.pose();
  JointConfig q;
  for (int i = 0; i < std::max(1, max_tries); ++i) {
    q = sample_random_config(model, rng);
    if (heights.contains(forward_kinematics(model, bp, q).position.z())) break;
  }
  return q;
}

Eigen::VectorXd build_observation(const JointConfig& q, const Pose& ee_world,
                                  const Twist& next_twist_world, const Pose& goal_world,
                                  const Pose& base_pose) {
  const int n = static_cast<int>(q.size());
  Eigen::VectorXd obs(n + kObsExtra);
  obs.head(n) = q;
  const auto ee = to_array(to_base_frame(ee_world, base_pose));
  const auto tw = to_array(twist_to_base_frame(next_twist_world, base_pose));
  const auto goal = to_array(to_base_frame(goal_world, base_pose));
  for (int i = 0; i < kPoseSlots; ++i) {
    obs[n + i] = ee[i];
    obs[n + kPoseSlots + i] = tw[i];
    obs[n + 2 * kPoseSlots + i] = goal[i];
  }
  return obs;
}

Env::Env(RobotModel model, EnvConfig config) : model_(std::move(model)), config_(config) {
  model_.validate();
}

void Env::reset(EpisodeSetup setup, const Rng& episode_rng) {
  if (setup.q.size() != model_.dof()) throw ContractError("episode start configuration has the wrong size");
  base_ = setup.base;
  base_.yaw = wrap_angle(base_.yaw);
  q_ = clamp_to_limits(model_, setup.q);
  ee_ = forward_kinematics(model_, base_.pose(), q_);
  generator_ = std::move(setup.generator);
  noise_rng_ = episode_rng.split("noise");
  ik_rng_ = episode_rng.split("ik-restart");
  ik_fail_count_ = 0;
  step_count_ = 0;
  done_ = false;
}

const Pose& Env::desired_pose() const {
  if (!generator_) throw ContractError("environment has not been reset");
  return generator_->desired();
}

const Pose& Env::final_goal() const {
  if (!generator_) throw ContractError("environment has not been reset");
  return generator_->final_goal();
}

Twist Env::next_twist_world() const {
  if (!generator_) throw ContractError("environment has not been reset");
  return generator_->peek();
}

EnvState Env::observation() const {
  if (!generator_) throw ContractError("environment has not been reset");
  return {build_observation(q_, ee_, generator_->peek(), generator_->current_target(), base_.pose()),
          ik_fail_count_, step_count_};
}

StepOutcome Env::step(const Action& action) {
  if (!generator_) throw ContractError("environment has not been reset");
  if (done_) throw ContractError("step() called on a finished episode");
  if (!within_caps(model_, action)) throw ContractError("action exceeds the robot's velocity caps");

  const MotionGenerator::Output next = generator_->advance();

  Action executed = action;
  if (config_.mode == EnvMode::kTrain && config_.action_noise_std > 0.0) {
    executed.vx += config_.action_noise_std * noise_rng_.normal();
    if (model_.base_kind == BaseKind::kOmni) executed.vy += config_.action_noise_std * noise_rng_.normal();
  }
  base_ = integrate_base(base_, executed, config_.dt, model_.base_kind);
  const Pose base_pose = base_.pose();

  const IkResult ik = check_feasibility(model_, base_pose, next.desired, q_, ik_rng_, config_.ik);
  StepOutcome out;
  out.info.ik_failed = !ik.feasible;
  if (ik.feasible) {
    q_ = ik.config;
  } else {
    ++ik_fail_count_;
  }
  ee_ = forward_kinematics(model_, base_pose, q_);
  out.info.deviation = position_distance(ee_, next.desired);
  out.info.ang_deviation = rotation_distance(ee_.orientation, next.desired.orientation);
  out.reward = compute_reward(ik, action, config_.lambda, model_);
  ++step_count_;

  const Pose& goal = generator_->final_goal();
  out.info.success = generator_->heading_final() && position_distance(ee_, goal) <= config_.success_pos_tol &&
                     rotation_distance(ee_.orientation, goal.orientation) <= config_.success_ang_tol;
  const bool failed = ik_fail_count_ > config_.fail_thresh();
  out.info.truncated = !out.info.success && !failed && step_count_ >= config_.step_cap;
  done_ = out.info.success || failed || out.info.truncated;
  out.done = done_;
  out.state = observation();
  return out;
}

EpisodeSetup make_goal_reaching_episode(const RobotModel& model, const EnvConfig& config,
                                        const GoalReachingOptions& options, Rng& rng) {
  const double x = rng.uniform(-0.75, 0.75);
  const double y = rng.uniform(-0.75, 0.75);
  const Pose goal = sample_goal(model, rng, options.restricted, Vec3(x, y, 0.0), options.distance);
  const BaseState base = sample_start_at(rng, x, y, goal);
  const Interval& heights = options.restricted ? model.restr_height_range : model.goal_height_range;
  JointConfig q = sample_start_config(model, rng, base, heights);
  const Pose start_ee = forward_kinematics(model, base.pose(), q);
  return {base, std::move(q), MotionGenerator::to_goal(start_ee, goal, config.motion)};
}

}  // namespace kinfeas
