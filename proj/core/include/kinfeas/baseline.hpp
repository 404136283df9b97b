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


#ifndef KINFEAS_BASELINE_HPP_
#define KINFEAS_BASELINE_HPP_

#include "kinfeas/env.hpp"
#include "kinfeas/robot.hpp"
#include "kinfeas/spatial.hpp"

namespace kinfeas {

// Heading-error gain for the differential-drive baseline (1/s).
inline constexpr double kBaselineHeadingGain = 10.0;

// Replays the end-effector's planar velocity with the base. Omni bases copy
// it in the body frame with zero rotation. Differential drives turn toward
// the velocity bearing at a capped rate and drive with the velocity's
// forward component. The result always satisfies the velocity caps.
Action baseline_action(const RobotModel& model, const Twist& ee_twist_world, const BaseState& base,
                       double heading_gain = kBaselineHeadingGain);

}  // namespace kinfeas

#endif  // KINFEAS_BASELINE_HPP_
