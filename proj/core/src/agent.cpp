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


#include "kinfeas/agent.hpp"

#include <vector>

#include "kinfeas/baseline.hpp"
#include "kinfeas/error.hpp"
#include "kinfeas/sac.hpp"

namespace kinfeas {

Action BaselineAgent::act(const Env& env, const EnvState& /*state*/) {
  return baseline_action(env.model(), env.next_twist_world(), env.base());
}

PolicyAgent::PolicyAgent(Mlp<float> actor, const RobotModel& model, std::string label)
    : actor_(std::move(actor)), label_(std::move(label)) {
  if (actor_.input_dim() != observation_dim(model) || actor_.output_dim() != 2 * action_dim(model)) {
    throw ConfigError("policy network does not match the observation/action sizes of '" + model.name + "'");
  }
}

Action PolicyAgent::act(const Env& env, const EnvState& state) {
  const VectorX<float> a = policy_deterministic(actor_, VectorX<float>(state.obs.cast<float>()));
  const std::vector<double> normalized(a.data(), a.data() + a.size());
  return clamp_to_caps(env.model(), action_from_normalized(env.model(), normalized));
}

}  // namespace kinfeas
