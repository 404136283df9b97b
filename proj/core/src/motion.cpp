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

#include "kinfeas/motion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "kinfeas/error.hpp"

namespace kinfeas {
namespace {

// Pre-grasp stand-off used by the scripted door and drawer motions.
constexpr double kHandleStandoff = 0.15;

Vec3 approach_axis(const Pose& p) { return p.orientation.rotate(Vec3::UnitX()); }

std::size_t steps_needed(double amount, double per_step) {
  if (amount <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(amount / per_step - 1e-12));
}

void append_skip_first(std::vector<Pose>& out, const std::vector<Pose>& seg) {
  for (std::size_t i = out.empty() ? 0 : 1; i < seg.size(); ++i) out.push_back(seg[i]);
}

}  // namespace

LdsStepResult lds_step(const MotionState& state) {
  const MotionLimits& lim = state.limits;
  const Pose& cur = state.desired_pose;
  const Pose& goal = state.goal;

  LdsStepResult out{Twist::zero(), state};
  const Vec3 offset = goal.position - cur.position;
  const double dist = offset.norm();
  if (dist > 0.0) {
    const double reach = dist / lim.dt;  // speed that lands exactly on the goal
    const double speed = std::min(std::clamp(reach, lim.min_lin_vel, lim.max_lin_vel), reach);
    out.twist.linear = offset * (speed / dist);
    out.state.desired_pose.position =
        speed == reach ? goal.position : Vec3(cur.position + out.twist.linear * lim.dt);
  }

  const double angle = rotation_distance(cur.orientation, goal.orientation);
  if (angle > 0.0) {
    const double step = std::min(angle, lim.max_ang_vel * lim.dt);
    const Quat next =
        step == angle ? goal.orientation : slerp(cur.orientation, goal.orientation, step / angle);
    out.twist.angular_quat = next * cur.orientation.conjugate();
    out.state.desired_pose.orientation = next;
  }
  return out;
}

WaypointPlan make_pick_place_plan(const Pose& object_pose, const Pose& place_pose,
                                  double approach_offset) {
  WaypointPlan plan;
  Pose pre_pick = object_pose;
  pre_pick.position -= approach_offset * approach_axis(object_pose);
  Pose pre_place = place_pose;
  pre_place.position -= approach_offset * approach_axis(place_pose);
  plan.waypoints = {pre_pick, object_pose, pre_place, place_pose};
  return plan;
}

std::vector<Pose> approach_segment(const Pose& start, const Pose& target, double speed,
                                   double max_ang_vel, double dt) {
  const double dist = position_distance(start, target);
  const double angle = rotation_distance(start.orientation, target.orientation);
  const std::size_t n = std::max(steps_needed(dist, speed * dt), steps_needed(angle, max_ang_vel * dt));
  std::vector<Pose> out;
  out.reserve(n + 1);
  out.push_back(start);
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n);
    out.push_back({start.position + t * (target.position - start.position),
                   slerp(start.orientation, target.orientation, t)});
  }
  if (n > 0) out.back() = target;
  return out;
}

namespace {

std::vector<Pose> handle_approach(const Pose& start, const Pose& handle, double speed,
                                  const MotionLimits& limits) {
  const double v = std::min(speed, limits.max_lin_vel);
  Pose pre = handle;
  pre.position -= kHandleStandoff * approach_axis(handle);
  std::vector<Pose> poses = approach_segment(start, pre, v, limits.max_ang_vel, limits.dt);
  append_skip_first(poses, approach_segment(pre, handle, v, limits.max_ang_vel, limits.dt));
  return poses;
}

}  // namespace

Trajectory make_arc_trajectory(const Pose& start, const Pose& handle_pose, double radius,
                               double sweep, double speed, const MotionLimits& limits) {
  if (!(radius > 0.0) || sweep < 0.0 || sweep > kPi || !(speed > 0.0)) {
    throw ContractError("arc trajectory needs radius > 0, sweep in [0, pi] and speed > 0");
  }
  Trajectory traj{limits.dt, handle_approach(start, handle_pose, speed, limits)};

  Vec3 lateral = handle_pose.orientation.rotate(Vec3::UnitY());
  lateral.z() = 0.0;
  if (lateral.norm() < 1e-9) throw ContractError("handle y axis must not be vertical");
  lateral.normalize();
  const Vec3 hinge = handle_pose.position + radius * lateral;
  const Vec3 arm = handle_pose.position - hinge;
  // Swing so that the handle first moves back along the approach axis.
  const double sign = Vec3::UnitZ().cross(arm).dot(approach_axis(handle_pose)) > 0.0 ? -1.0 : 1.0;

  const std::size_t m = steps_needed(radius * sweep, speed * limits.dt);
  for (std::size_t k = 1; k <= m; ++k) {
    const double theta = sign * sweep * static_cast<double>(k) / static_cast<double>(m);
    const Quat rz = Quat::from_yaw(theta);
    traj.poses.push_back({hinge + rz.rotate(arm), rz * handle_pose.orientation});
  }
  return traj;
}

Trajectory make_pull_trajectory(const Pose& start, const Pose& handle_pose, double distance,
                                double speed, const MotionLimits& limits) {
  if (distance < 0.0 || !(speed > 0.0)) {
    throw ContractError("pull trajectory needs distance >= 0 and speed > 0");
  }
  Trajectory traj{limits.dt, handle_approach(start, handle_pose, speed, limits)};
  const Vec3 dir = -approach_axis(handle_pose);
  const std::size_t m = steps_needed(distance, speed * limits.dt);
  for (std::size_t k = 1; k <= m; ++k) {
    const double s = distance * static_cast<double>(k) / static_cast<double>(m);
    traj.poses.push_back({handle_pose.position + s * dir, handle_pose.orientation});
  }
  return traj;
}

std::optional<Twist> playback_step(const Trajectory& traj, std::size_t index) {
  if (index + 1 >= traj.poses.size()) return std::nullopt;
  return twist_between(traj.poses[index], traj.poses[index + 1], traj.dt);
}

void write_trajectory_jsonl(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trajectory '" + path.string() + "'");
  out << nlohmann::json{{"dt", traj.dt}, {"frame", "world"}}.dump() << '\n';
  for (const Pose& p : traj.poses) out << nlohmann::json(p).dump() << '\n';
  if (!out) throw IoError("failed writing trajectory '" + path.string() + "'");
}

Trajectory read_trajectory_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory '" + path.string() + "'");
  Trajectory traj;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trajectory '" + path.string() + "' is empty");
  try {
    const auto header = nlohmann::json::parse(line);
    traj.dt = header.at("dt").get<double>();
    if (header.value("frame", std::string("world")) != "world") {
      throw ConfigError("trajectory '" + path.string() + "' must be in the world frame");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      traj.poses.push_back(nlohmann::json::parse(line).get<Pose>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed trajectory '" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("malformed trajectory '" + path.string() + "': " + e.what());
  }
  if (!(traj.dt > 0.0)) throw ConfigError("trajectory dt must be positive");
  return traj;
}

MotionGenerator MotionGenerator::to_goal(const Pose& start, const Pose& goal,
                                         const MotionLimits& limits) {
  WaypointPlan plan;
  plan.waypoints = {goal};
  return along_plan(start, std::move(plan), limits);
}

MotionGenerator MotionGenerator::along_plan(const Pose& start, WaypointPlan plan,
                                            const MotionLimits& limits) {
  if (plan.waypoints.empty()) throw ContractError("waypoint plan is empty");
  if (plan.current_index >= plan.waypoints.size()) throw ContractError("waypoint index out of range");
  MotionGenerator g;
  g.dt_ = limits.dt;
  const Pose goal = plan.current();
  g.state_ = PlanState{MotionState{start, goal, limits}, std::move(plan)};
  return g;
}

MotionGenerator MotionGenerator::playback(Trajectory traj) {
  if (traj.poses.empty()) throw ContractError("cannot play back an empty trajectory");
  MotionGenerator g;
  g.dt_ = traj.dt;
  g.state_ = PlaybackState{std::move(traj), 0};
  return g;
}

MotionGenerator::Output MotionGenerator::advance() {
  if (auto* ps = std::get_if<PlanState>(&state_)) {
    WaypointPlan& plan = ps->plan;
    if (!plan.at_last() &&
        position_distance(ps->motion.desired_pose, plan.current()) <= plan.advance_tol) {
      ++plan.current_index;
      ps->motion.goal = plan.current();
    }
    LdsStepResult r = lds_step(ps->motion);
    ps->motion = r.state;
    return {ps->motion.desired_pose, r.twist};
  }
  auto& pb = std::get<PlaybackState>(state_);
  const std::optional<Twist> tw = playback_step(pb.traj, pb.index);
  if (!tw) return {pb.traj.poses.back(), Twist::zero()};
  ++pb.index;
  return {pb.traj.poses[pb.index], *tw};
}

Twist MotionGenerator::peek() const {
  if (const auto* pb = std::get_if<PlaybackState>(&state_)) {
    return playback_step(pb->traj, pb->index).value_or(Twist::zero());
  }
  MotionGenerator copy = *this;
  return copy.advance().twist;
}

const Pose& MotionGenerator::desired() const {
  if (const auto* ps = std::get_if<PlanState>(&state_)) return ps->motion.desired_pose;
  const auto& pb = std::get<PlaybackState>(state_);
  return pb.traj.poses[pb.index];
}

const Pose& MotionGenerator::current_target() const {
  if (const auto* ps = std::get_if<PlanState>(&state_)) return ps->plan.current();
  return std::get<PlaybackState>(state_).traj.poses.back();
}

const Pose& MotionGenerator::final_goal() const {
  if (const auto* ps = std::get_if<PlanState>(&state_)) return ps->plan.waypoints.back();
  return std::get<PlaybackState>(state_).traj.poses.back();
}

bool MotionGenerator::heading_final() const {
  if (const auto* ps = std::get_if<PlanState>(&state_)) return ps->plan.at_last();
  return true;
}

bool MotionGenerator::finished() const {
  if (const auto* ps = std::get_if<PlanState>(&state_)) {
    return ps->plan.at_last() && ps->motion.desired_pose == ps->plan.current();
  }
  const auto& pb = std::get<PlaybackState>(state_);
  return pb.index + 1 >= pb.traj.poses.size();
}

}  // namespace kinfeas
