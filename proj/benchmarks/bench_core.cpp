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


#include <benchmark/benchmark.h>

#include <string>

#include "kinfeas/env.hpp"
#include "kinfeas/mlp.hpp"
#include "kinfeas/replay_buffer.hpp"
#include "kinfeas/robot.hpp"
#include "kinfeas/sac.hpp"

namespace {

using namespace kinfeas;

const RobotModel& omni7() {
  static const RobotModel m = load_robot(std::string(KINFEAS_CONFIG_DIR) + "/robots/omni7.json");
  return m;
}

void BM_ForwardKinematics(benchmark::State& state) {
  Rng rng(1);
  const JointConfig q = sample_random_config(omni7(), rng);
  const Pose base = Pose::planar(0.3, -0.2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(omni7(), base, q));
}
BENCHMARK(BM_ForwardKinematics);

void BM_IkTracking(benchmark::State& state) {
  // A small task-space step from a known solution, as in one env step.
  Rng rng(2);
  const JointConfig q = sample_random_config(omni7(), rng);
  Pose target = forward_kinematics(omni7(), Pose::identity(), q);
  target.position.x() += 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_feasibility(omni7(), Pose::identity(), target, q, rng, IkOptions{}));
  }
}
BENCHMARK(BM_IkTracking);

void BM_MlpForward(benchmark::State& state) {
  Rng rng(3);
  Mlp<float> net(28, {256, 256}, 6);
  net.init_uniform(rng);
  const MatrixX<float> x = MatrixX<float>::Random(28, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(256);

void BM_SacUpdate(benchmark::State& state) {
  const int obs = observation_dim(omni7());
  const int act = action_dim(omni7());
  SacLearner<float> learner(obs, act, SacConfig{}, Rng(4));
  ReplayBuffer buffer(obs, act, 4096);
  Rng rng(5);
  for (int i = 0; i < 4096; ++i) {
    Transition t{Eigen::VectorXd::Random(obs), Eigen::VectorXd::Random(act), -rng.uniform(), Eigen::VectorXd::Random(obs),
                 rng.below(10) == 0};
    buffer.add(t);
  }
  for (auto _ : state) {
    const Batch<float> b = buffer.sample<float>(256, rng);
    benchmark::DoNotOptimize(learner.update(b, rng));
  }
}
BENCHMARK(BM_SacUpdate)->Unit(benchmark::kMillisecond);

void BM_EnvStep(benchmark::State& state) {
  EnvConfig cfg;
  Env env(omni7(), cfg);
  Rng rng(6);
  auto reset = [&] {
    Rng setup = rng.split(rng.next_u64());
    env.reset(make_goal_reaching_episode(omni7(), cfg, {}, setup), setup.split("env"));
  };
  reset();
  for (auto _ : state) {
    if (env.done()) reset();
    benchmark::DoNotOptimize(env.step({0.05, 0.0, 0.1}));
  }
}
BENCHMARK(BM_EnvStep);

}  // namespace

BENCHMARK_MAIN();
