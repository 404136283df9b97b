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


// Single-document JSON checkpoints. Parameters are float32 stored as the
// exactly representable doubles, so save -> load -> save is byte-identical.

#ifndef KINFEAS_CHECKPOINT_HPP_
#define KINFEAS_CHECKPOINT_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "kinfeas/mlp.hpp"
#include "kinfeas/rng.hpp"
#include "kinfeas/robot.hpp"
#include "kinfeas/sac.hpp"

namespace kinfeas {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  int version = kCheckpointVersion;
  std::string robot;
  SacConfig config;
  int obs_dim = 0;
  int action_dim = 0;
  Mlp<float> actor;
  Mlp<float> critic1;
  Mlp<float> critic2;
  Mlp<float> target1;
  Mlp<float> target2;
  float log_alpha = 0.0F;
  Rng::State rng_state;
  long steps = 0;
};

Checkpoint make_checkpoint(const SacLearner<float>& learner, const std::string& robot,
                           Rng::State rng_state, long steps);
// Copies networks and temperature into `learner`; optimizer moments restart.
void restore_learner(const Checkpoint& ckpt, SacLearner<float>& learner);

// Throws ConfigError unless the checkpoint was trained for `model`.
void check_compatible(const Checkpoint& ckpt, const RobotModel& model);

void to_json(nlohmann::json& j, const Checkpoint& c);
void from_json(const nlohmann::json& j, Checkpoint& c);

std::string serialize_checkpoint(const Checkpoint& c);
Checkpoint parse_checkpoint(const std::string& text);

// Writes via a temporary file and rename, so a crash never leaves a
// truncated checkpoint behind. Throws IoError.
void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace kinfeas

#endif  // KINFEAS_CHECKPOINT_HPP_
