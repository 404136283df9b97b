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


#include <cmath>

#include <gtest/gtest.h>

#include "kinfeas/baseline.hpp"
#include "kinfeas/env.hpp"
#include "test_util.hpp"

namespace kinfeas {
namespace {

Twist linear_twist(double x, double y, double z) {
  Twist t;
  t.linear = Vec3(x, y, z);
  return t;
}

TEST(Baseline, OmniFollowsPlanarTwist) {
  const RobotModel m = testing::preset("omni7");
  const Action a = baseline_action(m, linear_twist(0.1, 0, 0), BaseState{});
  EXPECT_NEAR(a.vx, 0.1, 1e-15);
  EXPECT_NEAR(a.vy, 0.0, 1e-15);
  EXPECT_EQ(a.omega, 0.0);
}

TEST(Baseline, OmniRotatesIntoBodyFrame) {
  const RobotModel m = testing::preset("omni7");
  const Action a = baseline_action(m, linear_twist(0.1, 0, 0), BaseState{0, 0, kPi / 2.0});
  EXPECT_NEAR(a.vx, 0.0, 1e-15);
  EXPECT_NEAR(a.vy, -0.1, 1e-15);
}

TEST(Baseline, VerticalTwistGivesZeroAction) {
  for (const char* name : {"omni7", "diff8"}) {
    const Action a = baseline_action(testing::preset(name), linear_twist(0, 0, 0.1), BaseState{0, 0, 0.3});
    EXPECT_EQ(a, Action{}) << name;
  }
}

TEST(Baseline, DiffSaturatesTurnWhenPerpendicular) {
  const RobotModel m = testing::preset("diff8");
  const Action left = baseline_action(m, linear_twist(0, 0.1, 0), BaseState{});
  EXPECT_DOUBLE_EQ(left.omega, m.max_base_ang_vel);
  EXPECT_NEAR(left.vx, 0.0, 1e-15);
  const Action right = baseline_action(m, linear_twist(0, -0.1, 0), BaseState{});
  EXPECT_DOUBLE_EQ(right.omega, -m.max_base_ang_vel);
  EXPECT_EQ(left.vy, 0.0);
}

TEST(Baseline, AlwaysWithinCaps) {
  Rng rng(3);
  for (const char* name : {"omni7", "omni5", "diff8"}) {
    const RobotModel m = testing::preset(name);
    for (int i = 0; i < 1000; ++i) {
      const Twist t = linear_twist(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
      const Action a = baseline_action(m, t, BaseState{0, 0, rng.uniform(-kPi, kPi)});
      ASSERT_TRUE(within_caps(m, a)) << name;
    }
  }
}

}  // namespace
}  // namespace kinfeas
