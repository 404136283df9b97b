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


#ifndef KINFEAS_AGENT_HPP_
#define KINFEAS_AGENT_HPP_

#include <functional>
#include <memory>
#include <string>

#include "kinfeas/env.hpp"
#include "kinfeas/mlp.hpp"

namespace kinfeas {

// Maps the environment state to a base command within the velocity caps.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Action act(const Env& env, const EnvState& state) = 0;
  virtual std::string label() const = 0;
};

class BaselineAgent final : public Agent {
 public:
  Action act(const Env& env, const EnvState& state) override;
  std::string label() const override { return "baseline"; }
};

// Deterministic tanh(mean) of a trained actor, scaled to the caps.
class PolicyAgent final : public Agent {
 public:
  // Throws ConfigError if the actor does not fit `model`.
  PolicyAgent(Mlp<float> actor, const RobotModel& model, std::string label = "sac");
  Action act(const Env& env, const EnvState& state) override;
  std::string label() const override { return label_; }

 private:
  Mlp<float> actor_;
  std::string label_;
};

class FunctionAgent final : public Agent {
 public:
  using Fn = std::function<Action(const Env&, const EnvState&)>;
  explicit FunctionAgent(Fn fn, std::string label = "scripted")
      : fn_(std::move(fn)), label_(std::move(label)) {}
  Action act(const Env& env, const EnvState& state) override { return fn_(env, state); }
  std::string label() const override { return label_; }

 private:
  Fn fn_;
  std::string label_;
};

}  // namespace kinfeas

#endif  // KINFEAS_AGENT_HPP_
