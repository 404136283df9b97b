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


#ifndef KINFEAS_TRAINER_HPP_
#define KINFEAS_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "kinfeas/checkpoint.hpp"
#include "kinfeas/env.hpp"
#include "kinfeas/robot.hpp"
#include "kinfeas/sac.hpp"
#include "kinfeas/tasks.hpp"

namespace kinfeas {

struct CurvePoint {
  long step = 0;
  double eval_zero_fail_share = 0.0;
  double mean_return = 0.0;
};

struct TrainOptions {
  long total_steps = 1000000;
  TaskSpec task = task_by_name("ggr");
  long eval_interval = 10000;
  int eval_episodes = 20;
  long checkpoint_interval = 100000;
  // Periodic and final checkpoints go here; empty disables writing.
  std::filesystem::path checkpoint_dir;
  std::function<void(const CurvePoint&)> on_eval;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<CurvePoint> curve;
  long episodes = 0;
};

// Environment config with the learner's lambda and failure threshold applied.
EnvConfig training_env_config(const EnvConfig& base, const SacConfig& sac);

// Single-threaded SAC training from one seed. Throws ConfigError for
// hyperparameters outside the search ranges and IoError on checkpoint
// failures.
TrainResult train(const RobotModel& model, const EnvConfig& env_config, const SacConfig& sac,
                  const TrainOptions& options, std::uint64_t seed);

std::string curve_csv(const std::vector<CurvePoint>& curve);

std::filesystem::path periodic_checkpoint_path(const std::filesystem::path& dir, long step);
std::filesystem::path final_checkpoint_path(const std::filesystem::path& dir);

}  // namespace kinfeas

#endif  // KINFEAS_TRAINER_HPP_
