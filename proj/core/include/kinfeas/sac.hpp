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


// Soft actor-critic with twin critics, Polyak-averaged targets and an
// optionally learned entropy temperature.
//
// The actor emits a mean and a log standard deviation per action dimension;
// actions are tanh-squashed samples, so they always lie in [-1, 1].

#ifndef KINFEAS_SAC_HPP_
#define KINFEAS_SAC_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kinfeas/mlp.hpp"
#include "kinfeas/replay_buffer.hpp"
#include "kinfeas/rng.hpp"

namespace kinfeas {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

enum class EntropyMode { kLearned, kFixed };

struct SacConfig {
  std::vector<int> hidden{256, 256};
  int batch_size = 256;
  double gamma = 0.99;
  double tau = 0.005;
  double lr = 3e-4;
  double lr_decay = 0.999;  // multiplicative, applied once per finished episode
  EntropyMode entropy = EntropyMode::kLearned;
  double fixed_alpha = 0.2;    // used when entropy == kFixed
  double initial_alpha = 1.0;  // starting temperature when learned
  std::optional<double> target_entropy;  // defaults to -action_dim
  long warmup_steps = 50000;
  double lambda = 0.01;
  int ik_fail_thresh = 19;
  std::size_t buffer_size = 100000;

  // Human-readable list of fields outside the hyperparameter search ranges.
  std::vector<std::string> search_range_violations() const;
};

void to_json(nlohmann::json& j, const SacConfig& c);
void from_json(const nlohmann::json& j, SacConfig& c);

// Tanh-squashed diagonal Gaussian evaluated for a batch with explicit noise.
template <typename T>
struct SquashedSample {
  MatrixX<T> action;   // tanh(mean + std * eps)
  VectorX<T> log_prob;  // per column, with the tanh correction
  MatrixX<T> std;
  MatrixX<T> eps;
  MatrixX<T> log_std_active;  // 1 where log_std was not clamped, else 0
};

// `actor_out` has 2*d rows: means first, then raw log-stds.
template <typename T>
SquashedSample<T> squash_gaussian(const MatrixX<T>& actor_out, const MatrixX<T>& eps);

// Gradient w.r.t. the actor outputs of a loss with partials `d_action`
// (d x B) and `d_log_prob` (B), holding eps fixed.
template <typename T>
MatrixX<T> squash_gaussian_backward(const SquashedSample<T>& s, const MatrixX<T>& d_action,
                                    const VectorX<T>& d_log_prob);

template <typename T>
struct PolicyDraw {
  VectorX<T> action;  // in [-1, 1]^d
  T log_prob;
};

// Stochastic draw for one observation.
template <typename T>
PolicyDraw<T> policy_sample(const Mlp<T>& actor, const VectorX<T>& obs, Rng& rng);
// tanh(mean).
template <typename T>
VectorX<T> policy_deterministic(const Mlp<T>& actor, const VectorX<T>& obs);

template <typename T>
class SacLearner {
 public:
  struct Losses {
    double critic = 0.0;
    double actor = 0.0;
    double alpha = 0.0;
    double alpha_value = 0.0;  // temperature used for this update
  };

  SacLearner(int obs_dim, int action_dim, SacConfig config, Rng init_rng);

  // One gradient step on every network, then the target update.
  Losses update(const Batch<T>& batch, Rng& rng);

  // y = r + gamma (1 - done) (min target Q(s', a') - alpha log pi(a'|s')).
  VectorX<T> critic_targets(const Batch<T>& batch, const MatrixX<T>& eps_next, T alpha) const;
  // 0.5 * (mse(Q1, y) + mse(Q2, y)).
  T critic_loss(const Batch<T>& batch, const VectorX<T>& targets, MlpGrads<T>* grads1,
                MlpGrads<T>* grads2) const;
  // mean(alpha log pi(a|s) - min Q(s, a)), a reparameterized with `eps`.
  T actor_loss(const MatrixX<T>& obs, const MatrixX<T>& eps, T alpha, MlpGrads<T>* grads,
               VectorX<T>* log_prob = nullptr) const;
  // -log_alpha * mean(log_prob + target_entropy).
  double alpha_loss(double log_alpha, const VectorX<T>& log_prob, double* grad) const;

  double alpha() const;
  double log_alpha() const { return log_alpha_; }
  void set_log_alpha(double v) { log_alpha_ = v; }
  double target_entropy() const { return target_entropy_; }

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }

  int obs_dim() const { return obs_dim_; }
  int action_dim() const { return action_dim_; }
  const SacConfig& config() const { return config_; }

  Mlp<T>& actor() { return actor_; }
  const Mlp<T>& actor() const { return actor_; }
  Mlp<T>& critic(int i) { return i == 0 ? q1_ : q2_; }
  const Mlp<T>& critic(int i) const { return i == 0 ? q1_ : q2_; }
  Mlp<T>& target(int i) { return i == 0 ? t1_ : t2_; }
  const Mlp<T>& target(int i) const { return i == 0 ? t1_ : t2_; }

 private:
  MatrixX<T> draw_noise(Eigen::Index cols, Rng& rng) const;

  int obs_dim_;
  int action_dim_;
  SacConfig config_;
  double target_entropy_;
  double log_alpha_;
  double lr_;
  Mlp<T> actor_, q1_, q2_, t1_, t2_;
  Adam<T> actor_opt_, q1_opt_, q2_opt_;
  ScalarAdam alpha_opt_;
};

extern template class SacLearner<float>;
extern template class SacLearner<double>;

}  // namespace kinfeas

#endif  // KINFEAS_SAC_HPP_
