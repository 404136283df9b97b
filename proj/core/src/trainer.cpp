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


#include "kinfeas/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "kinfeas/agent.hpp"
#include "kinfeas/error.hpp"
#include "kinfeas/metrics.hpp"
#include "kinfeas/replay_buffer.hpp"

namespace kinfeas {
namespace {


CurvePoint evaluate(const RobotModel& model, const EnvConfig& config, const TaskSpec& task,
                    const Mlp<float>& actor, int episodes, const Rng& eval_rng, long step) {
  PolicyAgent agent(actor, model);
  Env env(model, config);
  CurvePoint p{step, 0.0, 0.0};
  for (int i = 0; i < episodes; ++i) {
    const EpisodeResult r = run_episode(env, agent, task, eval_rng.split(static_cast<std::uint64_t>(i)));
    p.eval_zero_fail_share += r.zero_failures ? 1.0 : 0.0;
    p.mean_return += r.total_return;
  }
  if (episodes > 0) {
    p.eval_zero_fail_share /= episodes;
    p.mean_return /= episodes;
  }
  return p;
}

}  // namespace

EnvConfig training_env_config(const EnvConfig& base, const SacConfig& sac) {
  EnvConfig c = base;
  c.mode = EnvMode::kTrain;
  c.lambda = sac.lambda;
  c.train_fail_thresh = sac.ik_fail_thresh;
  return c;
}

std::filesystem::path periodic_checkpoint_path(const std::filesystem::path& dir, long step) {
  return dir / ("checkpoint_" + std::to_string(step) + ".json");
}

std::filesystem::path final_checkpoint_path(const std::filesystem::path& dir) {
  return dir / "checkpoint_final.json";
}

TrainResult train(const RobotModel& model, const EnvConfig& env_config, const SacConfig& sac,
                  const TrainOptions& options, std::uint64_t seed) {
  if (const auto bad = sac.search_range_violations(); !bad.empty()) {
    std::string msg = "SAC hyperparameters outside the search ranges:";
    for (const auto& b : bad) msg += " " + b;
    throw ConfigError(msg);
  }
  if (options.total_steps < 0 || options.eval_interval <= 0 || options.checkpoint_interval <= 0) {
    throw ConfigError("training step counts and intervals must be positive");
  }
  options.task.validate();

  const Rng root(seed);
  const int obs_dim = observation_dim(model);
  const int act_dim = action_dim(model);
  SacLearner<float> learner(obs_dim, act_dim, sac, root.split("init"));
  ReplayBuffer buffer(obs_dim, act_dim, sac.buffer_size);
  const Rng episodes_rng = root.split("env");
  Rng policy_rng = root.split("policy");
  Rng replay_rng = root.split("replay");
  const Rng eval_rng = root.split("eval");

  const EnvConfig cfg = training_env_config(env_config, sac);
  Env env(model, cfg);
  TrainResult result;
  const bool write = !options.checkpoint_dir.empty();
  if (write) std::filesystem::create_directories(options.checkpoint_dir);

  EnvState state;
  bool need_reset = true;
  for (long step = 1; step <= options.total_steps; ++step) {
    if (need_reset) {
      const Rng ep = episodes_rng.split(static_cast<std::uint64_t>(result.episodes));
      Rng setup_rng = ep.split("setup");
      env.reset(make_episode(model, cfg, options.task, setup_rng), ep.split("env"));
      state = env.observation();
      need_reset = false;
    }

    Eigen::VectorXd a_norm(act_dim);
    if (step <= sac.warmup_steps) {
      for (int i = 0; i < act_dim; ++i) a_norm[i] = policy_rng.uniform(-1.0, 1.0);
    } else {
      const PolicyDraw<float> d = policy_sample(learner.actor(), VectorX<float>(state.obs.cast<float>()), policy_rng);
      a_norm = d.action.cast<double>();
    }
    const std::vector<double> a_vec(a_norm.data(), a_norm.data() + act_dim);
    const StepOutcome out = env.step(clamp_to_caps(model, action_from_normalized(model, a_vec)));
    buffer.add({state.obs, a_norm, out.reward, out.state.obs, out.done && !out.info.truncated});
    state = out.state;
    if (out.done) {
      ++result.episodes;
      learner.set_lr(sac.lr * std::pow(sac.lr_decay, static_cast<double>(result.episodes)));
      need_reset = true;
    }

    if (step > sac.warmup_steps && buffer.size() >= static_cast<std::size_t>(sac.batch_size)) {
      learner.update(buffer.sample<float>(static_cast<std::size_t>(sac.batch_size), replay_rng), replay_rng);
    }

    if (step % options.eval_interval == 0) {
      result.curve.push_back(
          evaluate(model, env_config, options.task, learner.actor(), options.eval_episodes, eval_rng, step));
      if (options.on_eval) options.on_eval(result.curve.back());
    }
    if (write && step % options.checkpoint_interval == 0) {
      save_checkpoint(make_checkpoint(learner, model.name, policy_rng.state(), step),
                      periodic_checkpoint_path(options.checkpoint_dir, step));
    }
  }

  result.checkpoint = make_checkpoint(learner, model.name, policy_rng.state(), options.total_steps);
  if (write) save_checkpoint(result.checkpoint, final_checkpoint_path(options.checkpoint_dir));
  return result;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "step,eval_zero_fail_share,mean_return\n";
  char buf[128];
  for (const CurvePoint& p : curve) {
    std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f\n", p.step, p.eval_zero_fail_share, p.mean_return);
    out << buf;
  }
  return out.str();
}

}  // namespace kinfeas
