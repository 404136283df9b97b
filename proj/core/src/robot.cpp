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

#include "kinfeas/robot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "kinfeas/error.hpp"

namespace kinfeas {
namespace {

struct ChainEval {
  Vec3 ee_pos;
  Mat3 ee_rot;
};

// Single pass over the chain; fills the Jacobian when requested.
ChainEval evaluate_chain(const RobotModel& model, const Pose& base, const JointConfig& q,
                         Jacobian* jac) {
  const int n = model.dof();
  Mat3 rot = base.orientation.matrix();
  Vec3 pos = base.position;

  // Joint anchors and world axes are needed after the end-effector is known.
  Eigen::Matrix<double, 3, Eigen::Dynamic> anchors(3, n);
  Eigen::Matrix<double, 3, Eigen::Dynamic> axes(3, n);
  for (int i = 0; i < n; ++i) {
    const JointSpec& j = model.joints[i];
    pos += rot * j.origin.position;
    rot = rot * j.origin.orientation.matrix();
    const Vec3 axis_world = rot * j.axis;
    anchors.col(i) = pos;
    axes.col(i) = axis_world;
    if (j.kind == JointKind::kRevolute) {
      rot = rot * Eigen::AngleAxisd(q[i], j.axis).toRotationMatrix();
    } else {
      pos += axis_world * q[i];
    }
  }
  ChainEval out;
  out.ee_pos = pos + rot * model.ee_offset.position;
  out.ee_rot = rot * model.ee_offset.orientation.matrix();

  if (jac != nullptr) {
    jac->resize(6, n);
    for (int i = 0; i < n; ++i) {
      const Vec3 a = axes.col(i);
      if (model.joints[i].kind == JointKind::kRevolute) {
        jac->col(i).head<3>() = a.cross(out.ee_pos - anchors.col(i));
        jac->col(i).tail<3>() = a;
      } else {
        jac->col(i).head<3>() = a;
        jac->col(i).tail<3>().setZero();
      }
    }
  }
  return out;
}

void require_dims(const RobotModel& model, const JointConfig& q) {
  if (q.size() != model.dof()) {
    throw ContractError("joint configuration has " + std::to_string(q.size()) +
                        " entries, robot '" + model.name + "' has " +
                        std::to_string(model.dof()) + " joints");
  }
}

struct Attempt {
  JointConfig q;
  double pos_err = 0.0;
  double ang_err = 0.0;
  int iterations = 0;
  double score() const { return std::hypot(pos_err, ang_err); }
};

Attempt run_dls(const RobotModel& model, const Pose& base, const Pose& target, JointConfig q,
                const IkOptions& opt) {
  const Mat3 target_rot = target.orientation.matrix();
  const double damping_sq = opt.damping * opt.damping;
  Jacobian jac;
  Attempt best;
  best.pos_err = std::numeric_limits<double>::infinity();
  best.ang_err = std::numeric_limits<double>::infinity();

  Eigen::Matrix<double, 6, 1> err;
  int it = 0;
  for (; it <= opt.max_iterations; ++it) {
    const ChainEval fk = evaluate_chain(model, base, q, &jac);
    const Vec3 e_pos = target.position - fk.ee_pos;
    const Vec3 e_rot = Quat::from_matrix(target_rot * fk.ee_rot.transpose()).rotvec();
    const double pos_err = e_pos.norm();
    const double ang_err = e_rot.norm();
    if (std::hypot(pos_err, ang_err) < best.score()) {
      best.q = q;
      best.pos_err = pos_err;
      best.ang_err = ang_err;
    }
    if ((pos_err <= opt.tol_pos && ang_err <= opt.tol_ang) || it == opt.max_iterations) break;

    err.head<3>() = pos_err > opt.max_pos_step ? Vec3(e_pos * (opt.max_pos_step / pos_err)) : e_pos;
    err.tail<3>() = ang_err > opt.max_ang_step ? Vec3(e_rot * (opt.max_ang_step / ang_err)) : e_rot;

    Eigen::Matrix<double, 6, 6> a = jac * jac.transpose();
    a.diagonal().array() += damping_sq;
    const JointConfig step = jac.transpose() * a.ldlt().solve(err);
    const JointConfig next = clamp_to_limits(model, q + step);
    if ((next - q).lpNorm<Eigen::Infinity>() < opt.min_joint_step) break;
    q = next;
  }
  best.iterations = std::min(it, opt.max_iterations);
  return best;
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("robot definition is missing '") + key + "'");
  return j.at(key);
}

Interval interval_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(std::string(what) + " must be a [lo, hi] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

const char* to_string(BaseKind kind) { return kind == BaseKind::kOmni ? "omni" : "diff_drive"; }

const char* to_string(JointKind kind) {
  return kind == JointKind::kRevolute ? "revolute" : "prismatic";
}

void RobotModel::validate() const {
  if (name.empty()) throw ConfigError("robot name is empty");
  if (joints.empty()) throw ConfigError("robot '" + name + "' has no joints");
  if (!(max_base_lin_vel > 0.0) || !(max_base_ang_vel > 0.0)) {
    throw ConfigError("robot '" + name + "': base velocity caps must be positive");
  }
  if (pos_leeway < 0.0 || ang_leeway < 0.0) {
    throw ConfigError("robot '" + name + "': leeways must be non-negative");
  }
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const JointSpec& j = joints[i];
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
      throw ConfigError("robot '" + name + "': joint " + std::to_string(i) + " axis is not unit");
    }
    // Equal bounds describe a locked joint.
    if (!(j.limits.lo <= j.limits.hi)) {
      throw ConfigError("robot '" + name + "': joint " + std::to_string(i) +
                        " has lower limit above upper limit");
    }
  }
  if (goal_height_range.lo > goal_height_range.hi ||
      restr_height_range.lo > restr_height_range.hi) {
    throw ConfigError("robot '" + name + "': height ranges must be ordered");
  }
}

void to_json(nlohmann::json& j, const RobotModel& m) {
  nlohmann::json joints = nlohmann::json::array();
  for (const JointSpec& js : m.joints) {
    joints.push_back({{"kind", to_string(js.kind)},
                      {"axis", {js.axis.x(), js.axis.y(), js.axis.z()}},
                      {"origin", js.origin},
                      {"limits", {js.limits.lo, js.limits.hi}}});
  }
  j = {{"name", m.name},
       {"base_kind", to_string(m.base_kind)},
       {"joints", joints},
       {"ee_offset", m.ee_offset},
       {"max_base_lin_vel", m.max_base_lin_vel},
       {"max_base_ang_vel", m.max_base_ang_vel},
       {"pos_leeway", m.pos_leeway},
       {"ang_leeway", m.ang_leeway},
       {"goal_height_range", {m.goal_height_range.lo, m.goal_height_range.hi}},
       {"restr_height_range", {m.restr_height_range.lo, m.restr_height_range.hi}}};
}

void from_json(const nlohmann::json& j, RobotModel& m) {
  try {
    m = RobotModel{};
    m.name = require(j, "name").get<std::string>();
    const std::string base = require(j, "base_kind").get<std::string>();
    if (base == "omni") {
      m.base_kind = BaseKind::kOmni;
    } else if (base == "diff_drive") {
      m.base_kind = BaseKind::kDiffDrive;
    } else {
      throw ConfigError("unknown base_kind '" + base + "'");
    }
    for (const auto& jj : require(j, "joints")) {
      JointSpec js;
      const std::string kind = require(jj, "kind").get<std::string>();
      if (kind == "revolute") {
        js.kind = JointKind::kRevolute;
      } else if (kind == "prismatic") {
        js.kind = JointKind::kPrismatic;
      } else {
        throw ConfigError("unknown joint kind '" + kind + "'");
      }
      const auto axis = require(jj, "axis").get<std::array<double, 3>>();
      js.axis = Vec3(axis[0], axis[1], axis[2]);
      js.origin = require(jj, "origin").get<Pose>();
      js.limits = interval_from_json(require(jj, "limits"), "joint limits");
      m.joints.push_back(js);
    }
    m.ee_offset = require(j, "ee_offset").get<Pose>();
    m.max_base_lin_vel = require(j, "max_base_lin_vel").get<double>();
    m.max_base_ang_vel = require(j, "max_base_ang_vel").get<double>();
    m.pos_leeway = require(j, "pos_leeway").get<double>();
    m.ang_leeway = require(j, "ang_leeway").get<double>();
    m.goal_height_range = interval_from_json(require(j, "goal_height_range"), "goal_height_range");
    m.restr_height_range =
        interval_from_json(require(j, "restr_height_range"), "restr_height_range");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed robot definition: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed robot definition: ") + e.what());
  }
  m.validate();
}

RobotModel load_robot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open robot definition '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("robot definition '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return j.get<RobotModel>();
}

bool within_limits(const RobotModel& model, const JointConfig& q, double tol) {
  if (q.size() != model.dof()) return false;
  for (int i = 0; i < model.dof(); ++i) {
    const Interval& lim = model.joints[i].limits;
    if (!(q[i] >= lim.lo - tol && q[i] <= lim.hi + tol)) return false;
  }
  return true;
}

JointConfig clamp_to_limits(const RobotModel& model, const JointConfig& q) {
  JointConfig out = q;
  for (int i = 0; i < model.dof(); ++i) {
    const Interval& lim = model.joints[i].limits;
    out[i] = std::clamp(q[i], lim.lo, lim.hi);
  }
  return out;
}

Pose forward_kinematics(const RobotModel& model, const Pose& base_pose, const JointConfig& q) {
  require_dims(model, q);
  if (!within_limits(model, q)) {
    throw ContractError("joint configuration violates the limits of robot '" + model.name + "'");
  }
  const ChainEval fk = evaluate_chain(model, base_pose, q, nullptr);
  return {fk.ee_pos, Quat::from_matrix(fk.ee_rot)};
}

Jacobian geometric_jacobian(const RobotModel& model, const Pose& base_pose, const JointConfig& q) {
  require_dims(model, q);
  Jacobian jac;
  evaluate_chain(model, base_pose, q, &jac);
  return jac;
}

IkResult ik_solve(const RobotModel& model, const Pose& base_pose, const Pose& target,
                  const JointConfig& seed, Rng& rng, const IkOptions& options) {
  require_dims(model, seed);
  const double pos_bound = options.tol_pos + model.pos_leeway;
  const double ang_bound = options.tol_ang + model.ang_leeway;
  auto feasible = [&](const Attempt& a) {
    return a.pos_err <= pos_bound && a.ang_err <= ang_bound;
  };

  Attempt best = run_dls(model, base_pose, target, clamp_to_limits(model, seed), options);
  int iterations = best.iterations;
  for (int r = 0; r < options.random_restarts && !feasible(best); ++r) {
    Attempt a = run_dls(model, base_pose, target, sample_random_config(model, rng), options);
    iterations += a.iterations;
    if (feasible(a) || a.score() < best.score()) best = std::move(a);
  }
  return {feasible(best), std::move(best.q), best.pos_err, best.ang_err, iterations};
}

IkResult check_feasibility(const RobotModel& model, const Pose& base_pose,
                           const Pose& desired_ee_world, const JointConfig& current_q, Rng& rng,
                           const IkOptions& options) {
  return ik_solve(model, base_pose, desired_ee_world, current_q, rng, options);
}

JointConfig sample_random_config(const RobotModel& model, Rng& rng) {
  JointConfig q(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    const Interval& lim = model.joints[i].limits;
    q[i] = lim.lo == lim.hi ? lim.lo : rng.uniform(lim.lo, lim.hi);
  }
  return q;
}

}  // namespace kinfeas
