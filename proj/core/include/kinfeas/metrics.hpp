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


// Episode rollouts, per-step traces and the tracking metrics derived from them.

#ifndef KINFEAS_METRICS_HPP_
#define KINFEAS_METRICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kinfeas/agent.hpp"
#include "kinfeas/env.hpp"
#include "kinfeas/rng.hpp"
#include "kinfeas/tasks.hpp"

namespace kinfeas {

// Deviation above which an episode no longer counts as tracking closely (m).
inline constexpr double kDeviationThreshold = 0.05;

struct StepRecord {
  int t = 0;
  BaseState base;  // after the step
  Action action;
  JointConfig q;
  Pose desired;
  Pose ee;
  bool ik_failed = false;
  double reward = 0.0;
  double deviation = 0.0;
  double ang_deviation = 0.0;
};

struct EpisodeTrace {
  BaseState start_base;
  Pose start_ee;
  std::vector<StepRecord> steps;
  bool success = false;
};

struct DeviationStats {
  double max = 0.0;           // over all steps
  double mean_feasible = 0.0;  // over steps with a feasible IK solution; 0 if none
  int feasible_steps = 0;
};

// Throws ContractError on an empty trace.
DeviationStats compute_deviation_stats(const EpisodeTrace& trace);

struct EpisodeResult {
  bool zero_failures = true;
  bool within_threshold = true;  // max_deviation <= kDeviationThreshold
  double max_deviation = 0.0;
  double mean_deviation_over_success_steps = 0.0;
  int success_steps = 0;
  int ik_failures = 0;
  int steps = 0;
  bool success = false;
  double total_return = 0.0;
};

EpisodeResult summarize_episode(const EpisodeTrace& trace);

// Rolls out one episode that was already reset by the caller.
// `max_steps` < 0 runs until the environment reports done.
EpisodeTrace rollout(Env& env, Agent& agent, int max_steps = -1);

// Evaluation rollout: evaluation mode, no action noise, the task's failure
// cap. The episode start and all env randomness come from `episode_rng`.
EpisodeTrace run_episode_trace(Env& env, Agent& agent, const TaskSpec& task, const Rng& episode_rng,
                               int max_steps = -1);
EpisodeResult run_episode(Env& env, Agent& agent, const TaskSpec& task, const Rng& episode_rng);

// JSONL trace: one header object, then one object per step.
struct TraceHeader {
  std::string robot;
  std::string task;
  std::string agent;
  std::uint64_t seed = 0;
  Rng::State episode_rng;
  double dt = 0.1;
};

void write_trace_jsonl(std::ostream& out, const TraceHeader& header, const EpisodeTrace& trace);
struct ParsedTrace {
  TraceHeader header;
  EpisodeTrace trace;
};
ParsedTrace read_trace_jsonl(std::istream& in);

struct ReplayCheck {
  bool matches = false;
  int steps_checked = 0;
  std::string mismatch;  // first discrepancy, empty when matching
};

// Re-simulates a trace from its header with the recorded actions and
// compares rewards, IK outcomes and poses exactly.
ReplayCheck replay_trace(const RobotModel& model, const EnvConfig& config, const ParsedTrace& parsed);

}  // namespace kinfeas

#endif  // KINFEAS_METRICS_HPP_
