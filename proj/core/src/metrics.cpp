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


#include "kinfeas/metrics.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "kinfeas/error.hpp"

namespace kinfeas {
namespace {

using nlohmann::json;

std::vector<double> vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json step_json(const StepRecord& s) {
  return json{{"t", s.t},
              {"base", {s.base.x, s.base.y, s.base.yaw}},
              {"base_pose", s.base.pose()},
              {"action", {s.action.vx, s.action.vy, s.action.omega}},
              {"q", vec(s.q)},
              {"desired_ee", s.desired},
              {"actual_ee", s.ee},
              {"ik_failed", s.ik_failed},
              {"reward", s.reward},
              {"deviation", s.deviation},
              {"ang_deviation", s.ang_deviation}};
}

StepRecord step_from_json(const json& j) {
  StepRecord s;
  s.t = j.at("t").get<int>();
  const auto b = j.at("base").get<std::vector<double>>();
  const auto a = j.at("action").get<std::vector<double>>();
  if (b.size() != 3 || a.size() != 3) throw ConfigError("trace step has malformed base or action");
  s.base = {b[0], b[1], b[2]};
  s.action = {a[0], a[1], a[2]};
  const auto q = j.at("q").get<std::vector<double>>();
  s.q = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
  s.desired = j.at("desired_ee").get<Pose>();
  s.ee = j.at("actual_ee").get<Pose>();
  s.ik_failed = j.at("ik_failed").get<bool>();
  s.reward = j.at("reward").get<double>();
  s.deviation = j.at("deviation").get<double>();
  s.ang_deviation = j.at("ang_deviation").get<double>();
  return s;
}

}  // namespace

DeviationStats compute_deviation_stats(const EpisodeTrace& trace) {
  if (trace.steps.empty()) throw ContractError("deviation statistics need a non-empty trace");
  DeviationStats st;
  double sum = 0.0;
  for (const StepRecord& s : trace.steps) {
    st.max = std::max(st.max, s.deviation);
    if (!s.ik_failed) {
      sum += s.deviation;
      ++st.feasible_steps;
    }
  }
  st.mean_feasible = st.feasible_steps > 0 ? sum / st.feasible_steps : 0.0;
  return st;
}

EpisodeResult summarize_episode(const EpisodeTrace& trace) {
  EpisodeResult r;
  r.steps = static_cast<int>(trace.steps.size());
  r.success = trace.success;
  for (const StepRecord& s : trace.steps) {
    r.ik_failures += s.ik_failed ? 1 : 0;
    r.total_return += s.reward;
  }
  r.zero_failures = r.ik_failures == 0;
  if (!trace.steps.empty()) {
    const DeviationStats st = compute_deviation_stats(trace);
    r.max_deviation = st.max;
    r.mean_deviation_over_success_steps = st.mean_feasible;
    r.success_steps = st.feasible_steps;
  }
  r.within_threshold = r.max_deviation <= kDeviationThreshold;
  return r;
}

EpisodeTrace rollout(Env& env, Agent& agent, int max_steps) {
  EpisodeTrace trace;
  trace.start_base = env.base();
  trace.start_ee = env.ee_pose();
  EnvState state = env.observation();
  while (!env.done() && (max_steps < 0 || static_cast<int>(trace.steps.size()) < max_steps)) {
    const Action a = agent.act(env, state);
    const StepOutcome o = env.step(a);
    StepRecord rec;
    rec.t = o.state.step_count;
    rec.base = env.base();
    rec.action = a;
    rec.q = env.q();
    rec.desired = env.desired_pose();
    rec.ee = env.ee_pose();
    rec.ik_failed = o.info.ik_failed;
    rec.reward = o.reward;
    rec.deviation = o.info.deviation;
    rec.ang_deviation = o.info.ang_deviation;
    trace.steps.push_back(std::move(rec));
    trace.success = o.info.success;
    state = o.state;
  }
  return trace;
}

EpisodeTrace run_episode_trace(Env& env, Agent& agent, const TaskSpec& task, const Rng& episode_rng,
                               int max_steps) {
  env.set_mode(EnvMode::kEval);
  env.set_eval_fail_thresh(task.eval_fail_cap);
  Rng setup_rng = episode_rng.split("setup");
  env.reset(make_episode(env.model(), env.config(), task, setup_rng), episode_rng.split("env"));
  return rollout(env, agent, max_steps);
}

EpisodeResult run_episode(Env& env, Agent& agent, const TaskSpec& task, const Rng& episode_rng) {
  return summarize_episode(run_episode_trace(env, agent, task, episode_rng));
}

void write_trace_jsonl(std::ostream& out, const TraceHeader& h, const EpisodeTrace& trace) {
  const json header{{"robot", h.robot},
                    {"task", h.task},
                    {"agent", h.agent},
                    {"seed", h.seed},
                    {"episode_rng", {{"key", h.episode_rng.key}, {"counter", h.episode_rng.counter}}},
                    {"dt", h.dt},
                    {"frame", "world"},
                    {"start_base", {trace.start_base.x, trace.start_base.y, trace.start_base.yaw}},
                    {"start_ee", trace.start_ee},
                    {"steps", trace.steps.size()},
                    {"success", trace.success}};
  out << header.dump() << '\n';
  for (const StepRecord& s : trace.steps) out << step_json(s).dump() << '\n';
}

ParsedTrace read_trace_jsonl(std::istream& in) {
  ParsedTrace p;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace is empty");
  try {
    const json h = json::parse(line);
    p.header.robot = h.at("robot").get<std::string>();
    p.header.task = h.at("task").get<std::string>();
    p.header.agent = h.value("agent", std::string());
    p.header.seed = h.at("seed").get<std::uint64_t>();
    p.header.episode_rng.key = h.at("episode_rng").at("key").get<std::uint64_t>();
    p.header.episode_rng.counter = h.at("episode_rng").at("counter").get<std::uint64_t>();
    p.header.dt = h.at("dt").get<double>();
    p.trace.success = h.value("success", false);
    if (h.contains("start_base")) {
      const auto b = h.at("start_base").get<std::vector<double>>();
      if (b.size() != 3) throw ConfigError("trace header has a malformed start_base");
      p.trace.start_base = {b[0], b[1], b[2]};
    }
    if (h.contains("start_ee")) p.trace.start_ee = h.at("start_ee").get<Pose>();
    while (std::getline(in, line)) {
      if (!line.empty()) p.trace.steps.push_back(step_from_json(json::parse(line)));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed trace: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed trace: ") + e.what());
  }
  return p;
}

ReplayCheck replay_trace(const RobotModel& model, const EnvConfig& config, const ParsedTrace& parsed) {
  ReplayCheck check;
  if (parsed.header.robot != model.name) {
    check.mismatch = "trace was recorded for robot '" + parsed.header.robot + "'";
    return check;
  }
  std::size_t next = 0;
  FunctionAgent replay([&](const Env&, const EnvState&) {
    return next < parsed.trace.steps.size() ? parsed.trace.steps[next].action : Action{};
  });
  Env env(model, config);
  env.set_mode(EnvMode::kEval);
  const TaskSpec task = task_by_name(parsed.header.task);
  env.set_eval_fail_thresh(task.eval_fail_cap);
  Rng setup_rng = Rng::from_state(parsed.header.episode_rng).split("setup");
  env.reset(make_episode(model, env.config(), task, setup_rng),
            Rng::from_state(parsed.header.episode_rng).split("env"));
  for (const StepRecord& want : parsed.trace.steps) {
    if (env.done()) {
      check.mismatch = "episode ended before step " + std::to_string(want.t);
      return check;
    }
    const Action a = replay.act(env, env.observation());
    const StepOutcome o = env.step(a);
    ++next;
    if (o.reward != want.reward || o.info.ik_failed != want.ik_failed || !(env.ee_pose().position == want.ee.position) ||
        env.base().x != want.base.x || env.base().y != want.base.y || env.base().yaw != want.base.yaw) {
      check.mismatch = "step " + std::to_string(want.t) + " differs from the recording";
      return check;
    }
    ++check.steps_checked;
  }
  check.matches = true;
  return check;
}

}  // namespace kinfeas
