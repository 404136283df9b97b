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

#include "kinfeas/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kinfeas {

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

double wrap_angle(double angle) {
  double a = std::fmod(angle + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

namespace {
constexpr double kUnitSlack = std::numeric_limits<double>::epsilon();
}  // namespace

Quat Quat::from_unit(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (w < 0.0 || std::abs(n - 1.0) > 4.0 * kUnitSlack) return {w, x, y, z};
  Quat q;
  q.w_ = w;
  q.x_ = x;
  q.y_ = y;
  q.z_ = z;
  return q;
}

Quat::Quat(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) return;
  const double s = (w < 0.0 ? -1.0 : 1.0) / n;
  w_ = w * s;
  x_ = x * s;
  y_ = y * s;
  z_ = z * s;
}

Quat Quat::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return {};
  const Vec3 u = axis / n;
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), u.x() * s, u.y() * s, u.z() * s};
}

Quat Quat::from_rotvec(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    // First-order expansion keeps tiny rotations exact to machine precision.
    return {1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z()};
  }
  return from_axis_angle(rotvec / angle, angle);
}

Quat Quat::from_matrix(const Mat3& rot) { return from_eigen(Eigen::Quaterniond(rot)); }

Quat Quat::from_eigen(const Eigen::Quaterniond& q) { return {q.w(), q.x(), q.y(), q.z()}; }

Quat Quat::conjugate() const {
  Quat q;
  q.w_ = w_;
  q.x_ = -x_;
  q.y_ = -y_;
  q.z_ = -z_;
  return q;
}

Quat Quat::operator*(const Quat& r) const {
  return {w_ * r.w_ - x_ * r.x_ - y_ * r.y_ - z_ * r.z_,
          w_ * r.x_ + x_ * r.w_ + y_ * r.z_ - z_ * r.y_,
          w_ * r.y_ - x_ * r.z_ + y_ * r.w_ + z_ * r.x_,
          w_ * r.z_ + x_ * r.y_ - y_ * r.x_ + z_ * r.w_};
}

Vec3 Quat::rotate(const Vec3& v) const {
  const Vec3 u(x_, y_, z_);
  const Vec3 t = 2.0 * u.cross(v);
  return v + w_ * t + u.cross(t);
}

Mat3 Quat::matrix() const { return eigen().toRotationMatrix(); }

double Quat::angle() const { return 2.0 * std::atan2(vec().norm(), std::abs(w_)); }

Vec3 Quat::rotvec() const {
  const Vec3 v = vec();
  const double s = v.norm();
  if (s < 1e-15) return 2.0 * v;
  // w >= 0 always, so the angle lands in [0, pi].
  return v * (2.0 * std::atan2(s, w_) / s);
}

double Quat::yaw() const {
  return std::atan2(2.0 * (w_ * z_ + x_ * y_), 1.0 - 2.0 * (y_ * y_ + z_ * z_));
}

double Quat::dot(const Quat& r) const { return w_ * r.w_ + x_ * r.x_ + y_ * r.y_ + z_ * r.z_; }

double Quat::norm() const { return std::sqrt(dot(*this)); }

Quat slerp(const Quat& q0, const Quat& q1, double t) {
  double d = q0.dot(q1);
  double s1 = 1.0;
  if (d < 0.0) {
    d = -d;
    s1 = -1.0;
  }
  double c0;
  double c1;
  if (d > 1.0 - 1e-6) {
    c0 = 1.0 - t;
    c1 = t;
  } else {
    const double theta = std::acos(d);
    const double sin_theta = std::sin(theta);
    c0 = std::sin((1.0 - t) * theta) / sin_theta;
    c1 = std::sin(t * theta) / sin_theta;
  }
  c1 *= s1;
  return {c0 * q0.w() + c1 * q1.w(), c0 * q0.x() + c1 * q1.x(), c0 * q0.y() + c1 * q1.y(),
          c0 * q0.z() + c1 * q1.z()};
}

double rotation_distance(const Quat& q0, const Quat& q1) {
  // Equal inputs give exactly zero; the product can carry rounding residue.
  if (q0 == q1) return 0.0;
  return (q0.conjugate() * q1).angle();
}

Pose Pose::from_isometry(const Eigen::Isometry3d& iso) {
  return {iso.translation(), Quat::from_matrix(iso.linear())};
}

Pose Pose::inverse() const {
  const Quat qi = orientation.conjugate();
  return {-qi.rotate(position), qi};
}

Pose Pose::operator*(const Pose& rhs) const {
  return {position + orientation.rotate(rhs.position), orientation * rhs.orientation};
}

Vec3 Pose::operator*(const Vec3& point) const { return position + orientation.rotate(point); }

Eigen::Isometry3d Pose::isometry() const {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = orientation.matrix();
  iso.translation() = position;
  return iso;
}

Pose to_base_frame(const Pose& world_pose, const Pose& base_pose) {
  return base_pose.inverse() * world_pose;
}

double position_distance(const Pose& a, const Pose& b) { return (a.position - b.position).norm(); }

Pose apply_twist(const Pose& pose, const Twist& twist, double dt) {
  return {pose.position + twist.linear * dt, twist.angular_quat * pose.orientation};
}

Twist twist_between(const Pose& from, const Pose& to, double dt) {
  return {(to.position - from.position) / dt, to.orientation * from.orientation.conjugate()};
}

Twist twist_to_base_frame(const Twist& twist, const Pose& base_pose) {
  const Quat& qb = base_pose.orientation;
  return {qb.conjugate().rotate(twist.linear), qb.conjugate() * twist.angular_quat * qb};
}

std::array<double, 7> to_array(const Pose& p) {
  const Quat& q = p.orientation;
  return {p.position.x(), p.position.y(), p.position.z(), q.w(), q.x(), q.y(), q.z()};
}

std::array<double, 7> to_array(const Twist& t) {
  const Quat& q = t.angular_quat;
  return {t.linear.x(), t.linear.y(), t.linear.z(), q.w(), q.x(), q.y(), q.z()};
}

Pose pose_from_array(const std::array<double, 7>& v) {
  return {Vec3(v[0], v[1], v[2]), Quat::from_unit(v[3], v[4], v[5], v[6])};
}

void to_json(nlohmann::json& j, const Pose& pose) { j = to_array(pose); }

void from_json(const nlohmann::json& j, Pose& pose) {
  if (!j.is_array() || j.size() != 7) {
    throw std::invalid_argument("pose must be a 7-element array [px,py,pz,qw,qx,qy,qz]");
  }
  pose = pose_from_array(j.get<std::array<double, 7>>());
}

}  // namespace kinfeas
