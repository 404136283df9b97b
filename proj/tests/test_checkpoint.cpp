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


#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kinfeas/checkpoint.hpp"
#include "kinfeas/env.hpp"
#include "kinfeas/error.hpp"
#include "test_util.hpp"

namespace kinfeas {
namespace {

SacLearner<float> small_learner(int obs, int act, std::uint64_t seed) {
  SacConfig cfg;
  cfg.hidden = {24, 24};
  return SacLearner<float>(obs, act, cfg, Rng(seed));
}

TEST(Checkpoint, SerializationIsByteStable) {
  SacLearner<float> learner = small_learner(28, 3, 1);
  learner.set_log_alpha(-1.2345678);
  const Checkpoint c = make_checkpoint(learner, "omni7", Rng(9).split("policy").state(), 1234);
  const std::string text = serialize_checkpoint(c);
  const Checkpoint back = parse_checkpoint(text);
  EXPECT_EQ(serialize_checkpoint(back), text);
  EXPECT_TRUE(back.actor == c.actor);
  EXPECT_TRUE(back.critic1 == c.critic1);
  EXPECT_TRUE(back.target2 == c.target2);
  EXPECT_EQ(back.log_alpha, c.log_alpha);
  EXPECT_EQ(back.rng_state, c.rng_state);
  EXPECT_EQ(back.steps, 1234);
  EXPECT_EQ(back.robot, "omni7");
  EXPECT_EQ(back.obs_dim, 28);
  EXPECT_EQ(back.action_dim, 3);
}

TEST(Checkpoint, FileRoundTripAndRestore) {
  testing::TempDir dir("ckpt");
  SacLearner<float> learner = small_learner(26, 3, 2);
  const Checkpoint c = make_checkpoint(learner, "omni5", Rng(1).state(), 7);
  const auto path = dir.path() / "c.json";
  save_checkpoint(c, path);
  const Checkpoint back = load_checkpoint(path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), serialize_checkpoint(back));

  SacLearner<float> other = small_learner(26, 3, 99);
  EXPECT_FALSE(other.actor() == learner.actor());
  restore_learner(back, other);
  EXPECT_TRUE(other.actor() == learner.actor());
  EXPECT_TRUE(other.target(1) == learner.target(1));
  EXPECT_FLOAT_EQ(static_cast<float>(other.log_alpha()), static_cast<float>(learner.log_alpha()));
}

TEST(Checkpoint, CompatibilityChecks) {
  const RobotModel omni7 = testing::preset("omni7");
  const RobotModel diff8 = testing::preset("diff8");
  const Checkpoint c = make_checkpoint(small_learner(observation_dim(omni7), action_dim(omni7), 3),
                                       omni7.name, Rng(0).state(), 0);
  EXPECT_NO_THROW(check_compatible(c, omni7));
  EXPECT_THROW(check_compatible(c, diff8), ConfigError);
  RobotModel renamed = omni7;
  renamed.name = "other";
  EXPECT_THROW(check_compatible(c, renamed), ConfigError);
}

TEST(Checkpoint, LoadErrors) {
  testing::TempDir dir("ckpt-bad");
  EXPECT_THROW(load_checkpoint(dir.path() / "missing.json"), IoError);
  std::ofstream(dir.path() / "garbage.json") << "{\"version\": 1";
  EXPECT_THROW(load_checkpoint(dir.path() / "garbage.json"), ConfigError);
  std::ofstream(dir.path() / "future.json") << "{\"version\": 99}";
  EXPECT_THROW(load_checkpoint(dir.path() / "future.json"), ConfigError);
  Checkpoint c = make_checkpoint(small_learner(5, 2, 1), "x", Rng(0).state(), 0);
  EXPECT_THROW(save_checkpoint(c, dir.path() / "no" / "such" / "dir" / "c.json"), IoError);
}

}  // namespace
}  // namespace kinfeas
