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
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "kinfeas/error.hpp"
#include "kinfeas/robot.hpp"
#include "test_util.hpp"

namespace kinfeas {
namespace {

using testing::preset;
using testing::two_link_model;

// Independent chain oracle: explicit 4x4 homogeneous matrices with
// Rodrigues rotations, no use of Quat or Pose arithmetic.
Eigen::Matrix4d homogeneous(const std::array<double, 7>& p) {
  const double w = p[3], x = p[4], y = p[5], z = p[6];
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = 1 - 2 * (y * y + z * z);
  m(0, 1) = 2 * (x * y - w * z);
  m(0, 2) = 2 * (x * z + w * y);
  m(1, 0) = 2 * (x * y + w * z);
  m(1, 1) = 1 - 2 * (x * x + z * z);
  m(1, 2) = 2 * (y * z - w * x);
  m(2, 0) = 2 * (x * z - w * y);
  m(2, 1) = 2 * (y * z + w * x);
  m(2, 2) = 1 - 2 * (x * x + y * y);
  m(0, 3) = p[0];
  m(1, 3) = p[1];
  m(2, 3) = p[2];
  return m;
}

Eigen::Matrix4d joint_motion(const JointSpec& j, double q) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  const Vec3& k = j.axis;
  if (j.kind == JointKind::kPrismatic) {
    m.block<3, 1>(0, 3) = q * k;
    return m;
  }
  Mat3 kx;
  kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  m.topLeftCorner<3, 3>() = Mat3::Identity() + std::sin(q) * kx + (1 - std::cos(q)) * kx * kx;
  return m;
}

Eigen::Matrix4d chain_oracle(const RobotModel& model, const Pose& base, const JointConfig& q) {
  Eigen::Matrix4d t = homogeneous(to_array(base));
  for (int i = 0; i < model.dof(); ++i) {
    t = t * homogeneous(to_array(model.joints[i].origin)) * joint_motion(model.joints[i], q[i]);
  }
  return t * homogeneous(to_array(model.ee_offset));
}

void expect_pose_matches(const Pose& p, const Eigen::Matrix4d& t, double tol) {
  EXPECT_NEAR((p.position - t.block<3, 1>(0, 3)).norm(), 0.0, tol);
  EXPECT_NEAR((p.orientation.matrix() - t.topLeftCorner<3, 3>()).norm(), 0.0, tol);
}

TEST(Presets, LoadAndHaveExpectedShape) {
  const RobotModel omni7 = preset("omni7");
  const RobotModel omni5 = preset("omni5");
  const RobotModel diff8 = preset("diff8");
  EXPECT_EQ(omni7.dof(), 7);
  EXPECT_EQ(omni5.dof(), 5);
  EXPECT_EQ(diff8.dof(), 8);
  EXPECT_EQ(omni7.base_kind, BaseKind::kOmni);
  EXPECT_EQ(diff8.base_kind, BaseKind::kDiffDrive);
  EXPECT_DOUBLE_EQ(omni5.pos_leeway, 0.10);
  EXPECT_NEAR(omni5.ang_leeway, deg_to_rad(12.0), 1e-12);
  EXPECT_EQ(omni7.pos_leeway, 0.0);
  EXPECT_EQ(omni7.ang_leeway, 0.0);
  EXPECT_EQ(diff8.pos_leeway, 0.0);
  EXPECT_EQ(diff8.ang_leeway, 0.0);
  EXPECT_EQ(omni7.goal_height_range, (Interval{0.2, 1.4}));
  EXPECT_EQ(diff8.restr_height_range, (Interval{0.4, 1.1}));
}

TEST(Presets, JsonRoundTrip) {
  for (const char* name : {"omni7", "omni5", "diff8"}) {
    const RobotModel m = preset(name);
    const nlohmann::json j = m;
    const RobotModel back = j.get<RobotModel>();
    EXPECT_EQ(nlohmann::json(back), j) << name;
  }
}

TEST(LoadRobot, Errors) {
  EXPECT_THROW(load_robot("/nonexistent/robot.json"), IoError);
  testing::TempDir dir("robot");
  const auto bad_json = dir.path() / "bad.json";
  std::ofstream(bad_json) << "{ not json";
  EXPECT_THROW(load_robot(bad_json), ConfigError);

  nlohmann::json j = preset("omni7");
  j["joints"][0]["limits"] = {1.0, 0.0};
  const auto inverted = dir.path() / "inverted.json";
  std::ofstream(inverted) << j.dump();
  EXPECT_THROW(load_robot(inverted), ConfigError);

  j = preset("omni7");
  j["max_base_lin_vel"] = 0.0;
  const auto no_caps = dir.path() / "caps.json";
  std::ofstream(no_caps) << j.dump();
  EXPECT_THROW(load_robot(no_caps), ConfigError);

  j = preset("omni7");
  j["base_kind"] = "legged";
  const auto kind = dir.path() / "kind.json";
  std::ofstream(kind) << j.dump();
  EXPECT_THROW(load_robot(kind), ConfigError);
}

TEST(ForwardKinematics, TwoLinkGeometry) {
  const RobotModel m = two_link_model();
  const Pose straight = forward_kinematics(m, Pose::identity(), Eigen::Vector2d(0.0, 0.0));
  EXPECT_TRUE(straight.position.isApprox(Vec3(2, 0, 0), 1e-12));
  const Pose bent = forward_kinematics(m, Pose::identity(), Eigen::Vector2d(0.0, kPi / 2.0));
  EXPECT_NEAR((bent.position - Vec3(1, 1, 0)).norm(), 0.0, 1e-12);
}

TEST(ForwardKinematics, Omni7ZeroConfigGolden) {
  const RobotModel m = preset("omni7");
  const JointConfig q = JointConfig::Zero(m.dof());
  const Pose p = forward_kinematics(m, Pose::identity(), q);
  expect_pose_matches(p, chain_oracle(m, Pose::identity(), q), 1e-12);
  EXPECT_NEAR(p.position.x(), 0.951, 1e-12);
  EXPECT_NEAR(p.position.y(), -0.188, 1e-12);
  EXPECT_NEAR(p.position.z(), 0.95, 1e-12);
  EXPECT_NEAR(p.orientation.angle(), 0.0, 1e-12);
}

TEST(ForwardKinematics, MatchesChainOracleOnRandomConfigs) {
  Rng rng(17);
  for (const char* name : {"omni7", "omni5", "diff8"}) {
    const RobotModel m = preset(name);
    for (int i = 0; i < 200; ++i) {
      const Pose base = Pose::planar(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi));
      const JointConfig q = sample_random_config(m, rng);
      expect_pose_matches(forward_kinematics(m, base, q), chain_oracle(m, base, q), 1e-12);
    }
  }
}

TEST(Jacobian, MatchesNumericDifferences) {
  Rng rng(23);
  for (const char* name : {"omni7", "omni5", "diff8"}) {
    const RobotModel m = preset(name);
    for (int trial = 0; trial < 20; ++trial) {
      const Pose base = Pose::planar(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-kPi, kPi));
      const JointConfig q = sample_random_config(m, rng);
      const Jacobian jac = geometric_jacobian(m, base, q);
      const Pose p0 = forward_kinematics(m, base, q);
      const double h = 1e-6;
      for (int i = 0; i < m.dof(); ++i) {
        JointConfig qp = q, qm = q;
        qp[i] += h;
        qm[i] -= h;
        const Pose pp = forward_kinematics(m, base, qp);
        const Pose pm = forward_kinematics(m, base, qm);
        const Vec3 lin = (pp.position - pm.position) / (2 * h);
        // World-frame angular velocity from the left-multiplied rotation delta.
        const Vec3 ang = (pp.orientation * pm.orientation.conjugate()).rotvec() / (2 * h);
        EXPECT_NEAR((jac.block<3, 1>(0, i) - lin).norm(), 0.0, 1e-5) << name << " joint " << i;
        EXPECT_NEAR((jac.block<3, 1>(3, i) - ang).norm(), 0.0, 1e-5) << name << " joint " << i;
      }
      (void)p0;
    }
  }
}

TEST(IkSolve, FixedPoint) {
  const RobotModel m = preset("omni7");
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const JointConfig seed = sample_random_config(m, rng);
    const Pose target = forward_kinematics(m, Pose::identity(), seed);
    const IkResult r = ik_solve(m, Pose::identity(), target, seed, rng);
    EXPECT_TRUE(r.feasible);
    EXPECT_LT(r.pos_err, 1e-6);
    EXPECT_LT((r.config - seed).norm(), 1e-6);
  }
}

TEST(IkSolve, TwoLinkMatchesAnalyticSolution) {
  const RobotModel m = two_link_model();
  Rng rng(1);
  const Pose target{Vec3(1, 1, 0), Quat::from_yaw(kPi / 2.0)};
  const IkResult r = ik_solve(m, Pose::identity(), target, Eigen::Vector2d(0.3, 1.2), rng);
  ASSERT_TRUE(r.feasible);
  // Elbow angle from the law of cosines: cos(q2) = (x^2 + y^2 - 2) / 2.
  const double q2 = std::acos((1.0 + 1.0 - 2.0) / 2.0);
  const bool elbow_up = std::abs(r.config[1] - q2) < 1e-3 && std::abs(r.config[0]) < 1e-3;
  const bool mirror = std::abs(r.config[1] + q2) < 1e-3 && std::abs(r.config[0] - kPi / 2.0) < 1e-3;
  EXPECT_TRUE(elbow_up || mirror) << r.config.transpose();
}

TEST(IkSolve, TwoLinkPositionOnlyTargetsFromAnalyticOracle) {
  // Random reachable planar targets; orientation taken from the analytic
  // elbow-up solution so the target is exactly reachable. Targets whose yaw
  // wraps past pi are skipped: their only in-limit solution hugs a joint
  // limit, where clamped DLS stalls.
  const RobotModel m = two_link_model();
  Rng rng(8);
  int solved = 0;
  for (int i = 0; i < 50;) {
    const double r = rng.uniform(0.2, 1.95);
    const double phi = rng.uniform(-kPi, kPi);
    const double q2 = std::acos((r * r - 2.0) / 2.0);
    const double q1 = wrap_angle(phi - std::atan2(std::sin(q2), 1.0 + std::cos(q2)));
    if (std::abs(q1 + q2) >= kPi) continue;
    ++i;
    const Pose target{Vec3(r * std::cos(phi), r * std::sin(phi), 0), Quat::from_yaw(q1 + q2)};
    const IkResult res = ik_solve(m, Pose::identity(), target, Eigen::Vector2d::Zero(), rng);
    if (res.feasible) {
      ++solved;
      EXPECT_LT(res.pos_err, 1e-3);
    }
  }
  EXPECT_GE(solved, 48);
}

TEST(IkSolve, OutOfReachIsInfeasible) {
  const RobotModel m = two_link_model();
  Rng rng(2);
  const Pose target{Vec3(3, 0, 0), Quat::identity()};
  const IkResult r = ik_solve(m, Pose::identity(), target, Eigen::Vector2d::Zero(), rng);
  EXPECT_FALSE(r.feasible);
  EXPECT_GT(r.pos_err, 0.9);
  EXPECT_TRUE(within_limits(m, r.config));
}

TEST(IkSolve, ResultAlwaysWithinLimits) {
  const RobotModel m = preset("diff8");
  Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    const Pose target{Vec3(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(0, 2)),
                      rng.unit_quat()};
    const IkResult r = ik_solve(m, Pose::identity(), target, sample_random_config(m, rng), rng);
    EXPECT_TRUE(within_limits(m, r.config));
    if (r.feasible) {
      EXPECT_LE(r.pos_err, 1e-3);
      EXPECT_LE(r.ang_err, deg_to_rad(0.5));
    }
  }
}

TEST(IkSolve, ContractErrorOnWrongSeedSize) {
  const RobotModel m = preset("omni7");
  Rng rng(0);
  EXPECT_THROW(ik_solve(m, Pose::identity(), Pose::identity(), JointConfig::Zero(3), rng),
               ContractError);
}

TEST(CheckFeasibility, CurrentPoseIsFeasible) {
  const RobotModel m = preset("omni7");
  Rng rng(4);
  const Pose base = Pose::planar(1.0, -2.0, 0.4);
  const JointConfig q = sample_random_config(m, rng);
  EXPECT_TRUE(check_feasibility(m, base, forward_kinematics(m, base, q), q, rng).feasible);
}

TEST(CheckFeasibility, FarAboveTheBaseIsInfeasible) {
  const RobotModel m = two_link_model();
  Rng rng(4);
  const Pose target{Vec3(0, 0, 5), Quat::identity()};
  EXPECT_FALSE(check_feasibility(m, Pose::identity(), target, Eigen::Vector2d::Zero(), rng).feasible);
}

TEST(CheckFeasibility, Omni5LeewayAcceptsEightCentimetreGap) {
  // The highest reachable pose has the lift at its top and the arm pointing
  // straight up; a target 8 cm above it differs only in height.
  const RobotModel m = preset("omni5");
  JointConfig top = JointConfig::Zero(m.dof());
  top[0] = m.joints[0].limits.hi;
  const Pose reach = forward_kinematics(m, Pose::identity(), top);
  Pose target = reach;
  target.position.z() += 0.08;

  // Sampling oracle: no sampled pose with an acceptable orientation gets
  // closer than 8 cm.
  Rng sampler(77);
  double nearest = 1e9;
  for (int i = 0; i < 200000; ++i) {
    const Pose p = forward_kinematics(m, Pose::identity(), sample_random_config(m, sampler));
    if (rotation_distance(p.orientation, target.orientation) > m.ang_leeway) continue;
    nearest = std::min(nearest, position_distance(p, target));
  }
  EXPECT_GE(nearest, 0.08 - 1e-9);

  Rng rng(3);
  JointConfig seed = top;
  seed[0] -= 0.1;
  seed[1] = -0.3;
  const IkResult r = check_feasibility(m, Pose::identity(), target, seed, rng);
  EXPECT_TRUE(r.feasible);
  EXPECT_NEAR(r.pos_err, 0.08, 2e-3);
  EXPECT_LE(r.ang_err, m.ang_leeway + deg_to_rad(0.5));

  // Without leeway the same target is rejected.
  RobotModel strict = m;
  strict.pos_leeway = 0.0;
  strict.ang_leeway = 0.0;
  EXPECT_FALSE(check_feasibility(strict, Pose::identity(), target, seed, rng).feasible);
}

TEST(SampleRandomConfig, Seed42Golden) {
  const RobotModel m = preset("omni7");
  Rng rng(42);
  const JointConfig q = sample_random_config(m, rng);
  const double golden[] = {-1.6584852799125296, -0.59974119927748304, 0.55306793216807071,
                           -1.4941649626666154, -4.0007927928186779, -1.5683337715922239,
                           0.079519414494669344};
  ASSERT_EQ(q.size(), 7);
  for (int i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(q[i], golden[i]);
}

TEST(SampleRandomConfig, DegenerateLimitIsFixed) {
  RobotModel m = two_link_model();
  m.joints[1].limits = {0.0, 0.0};
  Rng rng(6);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_random_config(m, rng)[1], 0.0);
}

TEST(SampleRandomConfig, EmpiricalMeanNearMidpoint) {
  const RobotModel m = preset("diff8");
  Rng rng(31);
  const int n = 10000;
  JointConfig sum = JointConfig::Zero(m.dof());
  for (int i = 0; i < n; ++i) {
    const JointConfig q = sample_random_config(m, rng);
    ASSERT_TRUE(within_limits(m, q));
    sum += q;
  }
  for (int j = 0; j < m.dof(); ++j) {
    const Interval& lim = m.joints[j].limits;
    const double sigma = (lim.hi - lim.lo) / std::sqrt(12.0 * n);
    EXPECT_NEAR(sum[j] / n, lim.mid(), 3.0 * sigma) << "joint " << j;
  }
}

}  // namespace
}  // namespace kinfeas
