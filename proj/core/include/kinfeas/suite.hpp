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


// Multi-seed evaluation and report rendering.
//
// Every (task, seed, episode) triple gets its own random stream derived from
// the master seed alone, so different agents face identical episodes and
// results do not depend on the worker count.

#ifndef KINFEAS_SUITE_HPP_
#define KINFEAS_SUITE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kinfeas/agent.hpp"
#include "kinfeas/env.hpp"
#include "kinfeas/metrics.hpp"
#include "kinfeas/rng.hpp"
#include "kinfeas/tasks.hpp"

namespace kinfeas {

struct SeedRow {
  std::string task;
  std::string seed;
  int episodes = 0;
  double zero_fail_share = 0.0;
  double dev5cm_share = 0.0;
  double mean_dev_m = 0.0;  // pooled over feasible steps of all episodes
};

struct AggregateRow {
  std::string task;
  int seeds = 0;
  double zero_fail_mean = 0.0;
  double zero_fail_std = 0.0;  // population std over seeds
  double dev5cm_mean = 0.0;
  double dev5cm_std = 0.0;
  double mean_dev_m = 0.0;
};

struct SuiteReport {
  std::string agent;
  std::vector<SeedRow> rows;  // task-major, then seed order
  std::vector<AggregateRow> aggregates;
};

SeedRow summarize_seed(const std::string& task, const std::string& seed,
                       const std::vector<EpisodeResult>& results);
// Task order follows first appearance in `rows`.
std::vector<AggregateRow> aggregate(const std::vector<SeedRow>& rows);

using EpisodeRunner =
    std::function<EpisodeResult(const TaskSpec& task, std::size_t seed_index, int episode)>;

struct SuiteOptions {
  std::string agent = "agent";
  std::vector<TaskSpec> tasks;
  std::vector<std::string> seeds;  // one label per seed; at least one
  int jobs = 1;
};

// Calls `runner` for every triple (possibly from several threads) and
// assembles the report.
SuiteReport run_suite(const SuiteOptions& options, const EpisodeRunner& runner);

// Stream for one evaluation episode.
Rng eval_episode_rng(std::uint64_t master_seed, std::size_t seed_index, const std::string& task,
                     int episode);

using AgentFactory = std::function<std::unique_ptr<Agent>(std::size_t seed_index)>;

// Runner that rolls out fresh agents from `factory` in `model`'s environment.
EpisodeRunner make_env_runner(const RobotModel& model, const EnvConfig& config, AgentFactory factory,
                              std::uint64_t master_seed);

// CSV columns: task,seed,zero_fail_share,dev5cm_share,mean_dev_m. Seed rows
// come first, then a "mean" and a "std" row per task.
std::string report_csv(const SuiteReport& report);
// Parses report_csv output back into seed rows (aggregate rows are recomputed).
SuiteReport parse_report_csv(const std::string& text, const std::string& agent);

// One row per report, one column per task; cells are percentages
// "zero-failure (within 5 cm)".
std::string report_markdown(const std::vector<SuiteReport>& reports);

}  // namespace kinfeas

#endif  // KINFEAS_SUITE_HPP_
