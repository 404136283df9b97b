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


#include "kinfeas/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace kinfeas {

Action baseline_action(const RobotModel& model, const Twist& ee_twist_world, const BaseState& base,
                       double heading_gain) {
  const double vx = ee_twist_world.linear.x();
  const double vy = ee_twist_world.linear.y();
  const double speed = std::hypot(vx, vy);
  if (speed < 1e-12) return {};

  const double c = std::cos(base.yaw);
  const double s = std::sin(base.yaw);
  Action a;
  if (model.base_kind == BaseKind::kOmni) {
    a.vx = c * vx + s * vy;
    a.vy = -s * vx + c * vy;
  } else {
    const double err = wrap_angle(std::atan2(vy, vx) - base.yaw);
    a.vx = speed * std::cos(err);
    a.omega = heading_gain * err;
  }
  return clamp_to_caps(model, a);
}

}  // namespace kinfeas
