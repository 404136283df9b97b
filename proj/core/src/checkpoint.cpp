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


#include "kinfeas/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "kinfeas/env.hpp"
#include "kinfeas/error.hpp"

namespace kinfeas {
namespace {

using nlohmann::json;

json matrix_rows(const MatrixX<float>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(static_cast<double>(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixX<float> rows_matrix(const json& rows, const std::string& name) {
  if (!rows.is_array() || rows.empty() || !rows.front().is_array()) {
    throw ConfigError("checkpoint parameter '" + name + "' must be a non-empty 2-D array");
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.front().size());
  MatrixX<float> m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
      throw ConfigError("checkpoint parameter '" + name + "' is ragged");
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = static_cast<float>(row[static_cast<std::size_t>(j)].get<double>());
  }
  return m;
}

void put_net(json& params, const std::string& prefix, const Mlp<float>& net) {
  for (int l = 0; l < net.num_layers(); ++l) {
    const std::string base = prefix + "." + std::to_string(l);
    params[base + ".weight"] = matrix_rows(net.weights()[l]);
    params[base + ".bias"] = matrix_rows(net.biases()[l].transpose());
  }
}

Mlp<float> get_net(const json& params, const std::string& prefix) {
  Mlp<float> net;
  for (int l = 0;; ++l) {
    const std::string base = prefix + "." + std::to_string(l);
    if (!params.contains(base + ".weight")) break;
    MatrixX<float> w = rows_matrix(params.at(base + ".weight"), base + ".weight");
    MatrixX<float> b = rows_matrix(params.at(base + ".bias"), base + ".bias");
    if (b.rows() != 1 || b.cols() != w.rows()) throw ConfigError("bias shape mismatch in '" + base + "'");
    if (l > 0 && w.cols() != net.weights().back().rows()) {
      throw ConfigError("layer shapes do not chain in '" + prefix + "'");
    }
    net.weights().push_back(std::move(w));
    net.biases().push_back(b.row(0).transpose());
  }
  if (net.num_layers() == 0) throw ConfigError("checkpoint has no parameters for '" + prefix + "'");
  return net;
}

}  // namespace

Checkpoint make_checkpoint(const SacLearner<float>& learner, const std::string& robot,
                           Rng::State rng_state, long steps) {
  Checkpoint c;
  c.robot = robot;
  c.config = learner.config();
  c.obs_dim = learner.obs_dim();
  c.action_dim = learner.action_dim();
  c.actor = learner.actor();
  c.critic1 = learner.critic(0);
  c.critic2 = learner.critic(1);
  c.target1 = learner.target(0);
  c.target2 = learner.target(1);
  c.log_alpha = static_cast<float>(learner.log_alpha());
  c.rng_state = rng_state;
  c.steps = steps;
  return c;
}

void restore_learner(const Checkpoint& ckpt, SacLearner<float>& learner) {
  if (ckpt.obs_dim != learner.obs_dim() || ckpt.action_dim != learner.action_dim()) {
    throw ConfigError("checkpoint dimensions do not match the learner");
  }
  learner.actor() = ckpt.actor;
  learner.critic(0) = ckpt.critic1;
  learner.critic(1) = ckpt.critic2;
  learner.target(0) = ckpt.target1;
  learner.target(1) = ckpt.target2;
  learner.set_log_alpha(ckpt.log_alpha);
}

void check_compatible(const Checkpoint& ckpt, const RobotModel& model) {
  if (ckpt.robot != model.name) {
    throw ConfigError("checkpoint was trained for robot '" + ckpt.robot + "', not '" + model.name + "'");
  }
  if (ckpt.obs_dim != observation_dim(model) || ckpt.action_dim != action_dim(model) ||
      ckpt.actor.input_dim() != ckpt.obs_dim || ckpt.actor.output_dim() != 2 * ckpt.action_dim) {
    throw ConfigError("checkpoint network dimensions do not match robot '" + model.name + "'");
  }
}

void to_json(json& j, const Checkpoint& c) {
  json params = json::object();
  put_net(params, "actor", c.actor);
  put_net(params, "critic1", c.critic1);
  put_net(params, "critic2", c.critic2);
  put_net(params, "target1", c.target1);
  put_net(params, "target2", c.target2);
  params["log_alpha"] = json::array({json::array({static_cast<double>(c.log_alpha)})});
  j = json{{"version", c.version},
           {"robot", c.robot},
           {"config", json{{"sac", c.config}, {"obs_dim", c.obs_dim}, {"action_dim", c.action_dim}}},
           {"params", std::move(params)},
           {"rng_state", json{{"key", c.rng_state.key}, {"counter", c.rng_state.counter}}},
           {"steps", c.steps}};
}

void from_json(const json& j, Checkpoint& c) {
  try {
    c.version = j.at("version").get<int>();
    if (c.version != kCheckpointVersion) {
      throw ConfigError("unsupported checkpoint version " + std::to_string(c.version));
    }
    c.robot = j.at("robot").get<std::string>();
    const json& cfg = j.at("config");
    c.config = cfg.at("sac").get<SacConfig>();
    c.obs_dim = cfg.at("obs_dim").get<int>();
    c.action_dim = cfg.at("action_dim").get<int>();
    const json& p = j.at("params");
    c.actor = get_net(p, "actor");
    c.critic1 = get_net(p, "critic1");
    c.critic2 = get_net(p, "critic2");
    c.target1 = get_net(p, "target1");
    c.target2 = get_net(p, "target2");
    c.log_alpha = rows_matrix(p.at("log_alpha"), "log_alpha")(0, 0);
    c.rng_state.key = j.at("rng_state").at("key").get<std::uint64_t>();
    c.rng_state.counter = j.at("rng_state").at("counter").get<std::uint64_t>();
    c.steps = j.at("steps").get<long>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  }
}

std::string serialize_checkpoint(const Checkpoint& c) { return json(c).dump(); }

Checkpoint parse_checkpoint(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  return j.get<Checkpoint>();
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  const std::string text = serialize_checkpoint(c);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
    out << text;
    if (!out.flush()) throw IoError("failed writing checkpoint '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at '" + path.string() + "': " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace kinfeas
