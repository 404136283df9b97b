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

// Parametric serial-chain robots mounted on a planar mobile base.
//
// The chain is evaluated as
//   world_T_ee = base * origin_1 * joint_1(q_1) * ... * origin_n * joint_n(q_n) * ee_offset
// where each origin is the fixed transform from the parent link and each
// joint rotates about (or slides along) its axis expressed in its own frame.
//
// Kinematic feasibility of a desired end-effector pose is decided by a
// damped-least-squares IK solve seeded from the current arm configuration.

#ifndef KINFEAS_ROBOT_HPP_
#define KINFEAS_ROBOT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "kinfeas/rng.hpp"
#include "kinfeas/spatial.hpp"

namespace kinfeas {

using JointConfig = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  double mid() const { return 0.5 * (lo + hi); }
  bool operator==(const Interval&) const = default;
};

enum class JointKind { kRevolute, kPrismatic };
enum class BaseKind { kOmni, kDiffDrive };

struct JointSpec {
  JointKind kind = JointKind::kRevolute;
  Vec3 axis = Vec3::UnitZ();
  Pose origin;
  Interval limits;
};

struct RobotModel {
  std::string name;
  BaseKind base_kind = BaseKind::kOmni;
  std::vector<JointSpec> joints;
  Pose ee_offset;
  double max_base_lin_vel = 0.0;  // m/s
  double max_base_ang_vel = 0.0;  // rad/s
  double pos_leeway = 0.0;        // m
  double ang_leeway = 0.0;        // rad
  Interval goal_height_range;
  Interval restr_height_range;

  int dof() const { return static_cast<int>(joints.size()); }
  bool has_leeway() const { return pos_leeway > 0.0 || ang_leeway > 0.0; }

  // Throws ConfigError describing the first violated invariant.
  void validate() const;
};

const char* to_string(BaseKind kind);
const char* to_string(JointKind kind);

void to_json(nlohmann::json& j, const RobotModel& model);
void from_json(const nlohmann::json& j, RobotModel& model);

// Loads and validates a robot definition; IoError if unreadable,
// ConfigError if malformed.
RobotModel load_robot(const std::filesystem::path& path);

bool within_limits(const RobotModel& model, const JointConfig& q, double tol = 1e-9);
JointConfig clamp_to_limits(const RobotModel& model, const JointConfig& q);

// World-frame end-effector pose. Throws ContractError if q has the wrong
// size or leaves the joint limits.
Pose forward_kinematics(const RobotModel& model, const Pose& base_pose, const JointConfig& q);

// Geometric Jacobian of the end-effector in the world frame: rows 0-2 map
// joint rates to linear velocity, rows 3-5 to angular velocity.
Jacobian geometric_jacobian(const RobotModel& model, const Pose& base_pose, const JointConfig& q);

struct IkOptions {
  double damping = 0.1;
  int max_iterations = 200;  // per attempt
  int random_restarts = 2;
  double tol_pos = 1e-3;                    // m
  double tol_ang = 0.5 * kPi / 180.0;       // rad
  double max_pos_step = 0.2;                // task-space error clamp per iteration, m
  double max_ang_step = 0.5;                // rad
  double min_joint_step = 1e-10;            // stall detection
};

struct IkResult {
  bool feasible = false;
  JointConfig config;
  double pos_err = 0.0;  // m
  double ang_err = 0.0;  // rad
  int iterations = 0;    // summed over attempts
};

// Damped least squares from `seed`, then random restarts drawn from `rng`
// while no feasible solution was found. Returns the best configuration seen.
IkResult ik_solve(const RobotModel& model, const Pose& base_pose, const Pose& target,
                  const JointConfig& seed, Rng& rng, const IkOptions& options = {});

// Feasibility of moving the end-effector to `desired_ee_world` from the
// current configuration.
IkResult check_feasibility(const RobotModel& model, const Pose& base_pose,
                           const Pose& desired_ee_world, const JointConfig& current_q, Rng& rng,
                           const IkOptions& options = {});

JointConfig sample_random_config(const RobotModel& model, Rng& rng);

}  // namespace kinfeas

#endif  // KINFEAS_ROBOT_HPP_
