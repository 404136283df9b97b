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

// Quaternion and rigid-transform arithmetic shared by every other module.
//
// Conventions:
//  * quaternions are stored (w, x, y, z) and always unit norm with w >= 0;
//  * poses map a child frame into its parent: p_parent = R * p_child + t;
//  * a Twist carries linear velocity in m/s and the orientation change of a
//    single control step as a unit quaternion, left-multiplied in the frame
//    the twist is expressed in.

#ifndef KINFEAS_SPATIAL_HPP_
#define KINFEAS_SPATIAL_HPP_

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <nlohmann/json_fwd.hpp>

namespace kinfeas {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

double deg_to_rad(double deg);
double wrap_angle(double angle);  // into (-pi, pi]

class Quat {
 public:
  Quat() = default;
  // Normalizes and canonicalizes; a zero input yields the identity.
  Quat(double w, double x, double y, double z);

  // Keeps components verbatim when they are already canonical and unit to a
  // few ulps, so that serialized quaternions parse back bit for bit.
  static Quat from_unit(double w, double x, double y, double z);
  static Quat identity() { return {}; }
  static Quat from_axis_angle(const Vec3& axis, double angle);
  static Quat from_rotvec(const Vec3& rotvec);
  static Quat from_yaw(double yaw) { return from_axis_angle(Vec3::UnitZ(), yaw); }
  static Quat from_matrix(const Mat3& rot);
  static Quat from_eigen(const Eigen::Quaterniond& q);

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  Vec3 vec() const { return {x_, y_, z_}; }

  Quat conjugate() const;
  Quat operator*(const Quat& rhs) const;
  Vec3 rotate(const Vec3& v) const;
  Mat3 matrix() const;
  Eigen::Quaterniond eigen() const { return {w_, x_, y_, z_}; }

  // Rotation angle in [0, pi].
  double angle() const;
  // Axis-angle vector with norm in [0, pi].
  Vec3 rotvec() const;
  double yaw() const;
  double dot(const Quat& rhs) const;
  double norm() const;

  bool operator==(const Quat&) const = default;

 private:
  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

// Spherical linear interpolation along the shortest arc.
Quat slerp(const Quat& q0, const Quat& q1, double t);

// Geodesic angle between two orientations, in [0, pi].
double rotation_distance(const Quat& q0, const Quat& q1);

struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation;

  static Pose identity() { return {}; }
  static Pose planar(double x, double y, double yaw) {
    return {Vec3(x, y, 0.0), Quat::from_yaw(yaw)};
  }
  static Pose from_isometry(const Eigen::Isometry3d& iso);

  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;   // composition
  Vec3 operator*(const Vec3& point) const;  // point transform
  Eigen::Isometry3d isometry() const;

  bool operator==(const Pose&) const = default;
};

// base_pose^-1 * world_pose.
Pose to_base_frame(const Pose& world_pose, const Pose& base_pose);

double position_distance(const Pose& a, const Pose& b);

struct Twist {
  Vec3 linear = Vec3::Zero();  // m/s
  Quat angular_quat;           // rotation applied over one step

  static Twist zero() { return {}; }
};

// Advances a pose by one step of a twist expressed in the pose's parent frame.
Pose apply_twist(const Pose& pose, const Twist& twist, double dt);

// Twist taking `from` exactly into `to` over one step of length dt.
Twist twist_between(const Pose& from, const Pose& to, double dt);

// Re-expresses a parent-frame twist in the frame of `base_pose`.
Twist twist_to_base_frame(const Twist& twist, const Pose& base_pose);

// Seven-number encodings: poses as [px,py,pz,qw,qx,qy,qz], twists as
// [vx,vy,vz,qw,qx,qy,qz].
std::array<double, 7> to_array(const Pose& pose);
std::array<double, 7> to_array(const Twist& twist);
Pose pose_from_array(const std::array<double, 7>& values);

void to_json(nlohmann::json& j, const Pose& pose);
void from_json(const nlohmann::json& j, Pose& pose);

}  // namespace kinfeas

#endif  // KINFEAS_SPATIAL_HPP_
