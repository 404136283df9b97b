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


#include "kinfeas/sac.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "kinfeas/error.hpp"

namespace kinfeas {
namespace {

template <typename T>
T softplus(T x) {
  return x > T(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// log(1 - tanh(u)^2), stable for large |u|.
template <typename T>
T log_one_minus_tanh_sq(T u) {
  return T(2) * (static_cast<T>(std::log(2.0)) - u - softplus(T(-2) * u));
}

template <typename T>
MatrixX<T> stack(const MatrixX<T>& top, const MatrixX<T>& bottom) {
  MatrixX<T> out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

void check_range(std::vector<std::string>& out, const char* name, double v, double lo, double hi) {
  if (!(v >= lo - 1e-12 && v <= hi + 1e-12)) {
    out.push_back(std::string(name) + "=" + std::to_string(v) + " outside [" + std::to_string(lo) +
                  ", " + std::to_string(hi) + "]");
  }
}

}  // namespace

std::vector<std::string> SacConfig::search_range_violations() const {
  std::vector<std::string> out;
  check_range(out, "batch_size", batch_size, 64, 256);
  check_range(out, "gamma", gamma, 0.98, 0.999);
  check_range(out, "tau", tau, 0.001, 0.005);
  check_range(out, "lr", lr, 1e-5, 3e-4);
  check_range(out, "lr_decay", lr_decay, 0.999, 0.999);
  check_range(out, "warmup_steps", static_cast<double>(warmup_steps), 0, 50000);
  check_range(out, "lambda", lambda, 0.0, 0.1);
  check_range(out, "ik_fail_thresh", ik_fail_thresh, 1, 99);
  check_range(out, "buffer_size", static_cast<double>(buffer_size), 100000, 100000);
  if (entropy == EntropyMode::kFixed) check_range(out, "fixed_alpha", fixed_alpha, 0.1, 0.3);
  return out;
}

void to_json(nlohmann::json& j, const SacConfig& c) {
  j = nlohmann::json{{"hidden", c.hidden},
                     {"batch_size", c.batch_size},
                     {"gamma", c.gamma},
                     {"tau", c.tau},
                     {"lr", c.lr},
                     {"lr_decay", c.lr_decay},
                     {"entropy", c.entropy == EntropyMode::kLearned ? nlohmann::json("learn")
                                                                     : nlohmann::json(c.fixed_alpha)},
                     {"initial_alpha", c.initial_alpha},
                     {"target_entropy", c.target_entropy ? nlohmann::json(*c.target_entropy)
                                                         : nlohmann::json(nullptr)},
                     {"warmup_steps", c.warmup_steps},
                     {"lambda", c.lambda},
                     {"ik_fail_thresh", c.ik_fail_thresh},
                     {"buffer_size", c.buffer_size}};
}

void from_json(const nlohmann::json& j, SacConfig& c) {
  try {
    SacConfig d;
    c.hidden = j.value("hidden", d.hidden);
    c.batch_size = j.value("batch_size", d.batch_size);
    c.gamma = j.value("gamma", d.gamma);
    c.tau = j.value("tau", d.tau);
    c.lr = j.value("lr", d.lr);
    c.lr_decay = j.value("lr_decay", d.lr_decay);
    c.entropy = d.entropy;
    c.fixed_alpha = d.fixed_alpha;
    if (j.contains("entropy")) {
      const auto& e = j.at("entropy");
      if (e.is_string()) {
        if (e.get<std::string>() != "learn") throw ConfigError("entropy must be \"learn\" or a number");
        c.entropy = EntropyMode::kLearned;
      } else {
        c.entropy = EntropyMode::kFixed;
        c.fixed_alpha = e.get<double>();
      }
    }
    c.initial_alpha = j.value("initial_alpha", d.initial_alpha);
    c.target_entropy.reset();
    if (j.contains("target_entropy") && !j.at("target_entropy").is_null()) {
      c.target_entropy = j.at("target_entropy").get<double>();
    }
    c.warmup_steps = j.value("warmup_steps", d.warmup_steps);
    c.lambda = j.value("lambda", d.lambda);
    c.ik_fail_thresh = j.value("ik_fail_thresh", d.ik_fail_thresh);
    c.buffer_size = j.value("buffer_size", d.buffer_size);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed SAC config: ") + e.what());
  }
  if (c.batch_size <= 0 || c.buffer_size == 0 || c.hidden.empty()) {
    throw ConfigError("SAC config needs positive batch size, buffer size and hidden layers");
  }
}

template <typename T>
SquashedSample<T> squash_gaussian(const MatrixX<T>& actor_out, const MatrixX<T>& eps) {
  const Eigen::Index d = actor_out.rows() / 2;
  if (actor_out.rows() != 2 * d || eps.rows() != d || eps.cols() != actor_out.cols()) {
    throw ContractError("actor output and noise shapes do not match");
  }
  const Eigen::Index b = actor_out.cols();
  SquashedSample<T> s;
  s.action.resize(d, b);
  s.log_prob.setZero(b);
  s.std.resize(d, b);
  s.eps = eps;
  s.log_std_active.resize(d, b);
  const T half_log_2pi = static_cast<T>(0.5 * std::log(2.0 * 3.14159265358979323846));
  for (Eigen::Index j = 0; j < b; ++j) {
    T lp = T(0);
    for (Eigen::Index i = 0; i < d; ++i) {
      const T raw = actor_out(d + i, j);
      const T ls = std::clamp(raw, static_cast<T>(kLogStdMin), static_cast<T>(kLogStdMax));
      s.log_std_active(i, j) = (raw > static_cast<T>(kLogStdMin) && raw < static_cast<T>(kLogStdMax)) ? T(1) : T(0);
      const T sd = std::exp(ls);
      const T e = eps(i, j);
      const T u = actor_out(i, j) + sd * e;
      s.std(i, j) = sd;
      s.action(i, j) = std::tanh(u);
      lp += T(-0.5) * e * e - ls - half_log_2pi - log_one_minus_tanh_sq(u);
    }
    s.log_prob[j] = lp;
  }
  return s;
}

template <typename T>
MatrixX<T> squash_gaussian_backward(const SquashedSample<T>& s, const MatrixX<T>& d_action,
                                    const VectorX<T>& d_log_prob) {
  const Eigen::Index d = s.action.rows();
  const Eigen::Index b = s.action.cols();
  MatrixX<T> out(2 * d, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const T a = s.action(i, j);
      const T da_du = T(1) - a * a;
      const T du_dls = s.std(i, j) * s.eps(i, j);
      // d log_prob / du = 2a; the -log_std term adds -1 to the log_std path.
      const T dl_du = d_action(i, j) * da_du + d_log_prob[j] * T(2) * a;
      out(i, j) = dl_du;
      out(d + i, j) = s.log_std_active(i, j) * (dl_du * du_dls - d_log_prob[j]);
    }
  }
  return out;
}

template <typename T>
PolicyDraw<T> policy_sample(const Mlp<T>& actor, const VectorX<T>& obs, Rng& rng) {
  const MatrixX<T> out = actor.forward(MatrixX<T>(obs));
  MatrixX<T> eps(out.rows() / 2, 1);
  for (Eigen::Index i = 0; i < eps.rows(); ++i) eps(i, 0) = static_cast<T>(rng.normal());
  const SquashedSample<T> s = squash_gaussian(out, eps);
  return {s.action.col(0), s.log_prob[0]};
}

template <typename T>
VectorX<T> policy_deterministic(const Mlp<T>& actor, const VectorX<T>& obs) {
  const VectorX<T> out = actor.forward_one(obs);
  return out.head(out.size() / 2).array().tanh().matrix();
}

template <typename T>
SacLearner<T>::SacLearner(int obs_dim, int action_dim, SacConfig config, Rng init_rng)
    : obs_dim_(obs_dim),
      action_dim_(action_dim),
      config_(std::move(config)),
      target_entropy_(config_.target_entropy.value_or(-static_cast<double>(action_dim))),
      log_alpha_(std::log(config_.entropy == EntropyMode::kLearned ? config_.initial_alpha
                                                                    : config_.fixed_alpha)),
      lr_(config_.lr),
      actor_(obs_dim, config_.hidden, 2 * action_dim),
      q1_(obs_dim + action_dim, config_.hidden, 1),
      q2_(obs_dim + action_dim, config_.hidden, 1) {
  if (obs_dim <= 0 || action_dim <= 0) throw ContractError("SAC needs positive dimensions");
  Rng a = init_rng.split("actor");
  Rng c1 = init_rng.split("critic1");
  Rng c2 = init_rng.split("critic2");
  actor_.init_uniform(a);
  q1_.init_uniform(c1);
  q2_.init_uniform(c2);
  t1_ = q1_;
  t2_ = q2_;
  actor_opt_ = Adam<T>(actor_);
  q1_opt_ = Adam<T>(q1_);
  q2_opt_ = Adam<T>(q2_);
}

template <typename T>
double SacLearner<T>::alpha() const {
  return std::exp(log_alpha_);
}

template <typename T>
MatrixX<T> SacLearner<T>::draw_noise(Eigen::Index cols, Rng& rng) const {
  MatrixX<T> eps(action_dim_, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < action_dim_; ++i) eps(i, j) = static_cast<T>(rng.normal());
  }
  return eps;
}

template <typename T>
VectorX<T> SacLearner<T>::critic_targets(const Batch<T>& batch, const MatrixX<T>& eps_next,
                                         T alpha) const {
  const SquashedSample<T> s = squash_gaussian(actor_.forward(batch.next_obs), eps_next);
  const MatrixX<T> x = stack(batch.next_obs, s.action);
  const MatrixX<T> q = t1_.forward(x).cwiseMin(t2_.forward(x));
  const T gamma = static_cast<T>(config_.gamma);
  VectorX<T> y(batch.size());
  for (Eigen::Index j = 0; j < batch.size(); ++j) {
    y[j] = batch.reward[j] + gamma * (T(1) - batch.done[j]) * (q(0, j) - alpha * s.log_prob[j]);
  }
  return y;
}

template <typename T>
T SacLearner<T>::critic_loss(const Batch<T>& batch, const VectorX<T>& targets, MlpGrads<T>* grads1,
                             MlpGrads<T>* grads2) const {
  const MatrixX<T> x = stack(batch.obs, batch.action);
  const T inv_b = T(1) / static_cast<T>(batch.size());
  T loss = T(0);
  const Mlp<T>* nets[2] = {&q1_, &q2_};
  MlpGrads<T>* grads[2] = {grads1, grads2};
  for (int k = 0; k < 2; ++k) {
    typename Mlp<T>::Cache cache;
    const MatrixX<T> q = nets[k]->forward(x, cache);
    const MatrixX<T> err = q - targets.transpose();
    loss += T(0.5) * err.squaredNorm() * inv_b;
    if (grads[k] != nullptr) nets[k]->backward(cache, err * inv_b, grads[k], nullptr);
  }
  return loss;
}

template <typename T>
T SacLearner<T>::actor_loss(const MatrixX<T>& obs, const MatrixX<T>& eps, T alpha,
                            MlpGrads<T>* grads, VectorX<T>* log_prob) const {
  typename Mlp<T>::Cache actor_cache;
  const SquashedSample<T> s = squash_gaussian(actor_.forward(obs, actor_cache), eps);
  if (log_prob != nullptr) *log_prob = s.log_prob;
  const MatrixX<T> x = stack(obs, s.action);
  typename Mlp<T>::Cache c1, c2;
  const MatrixX<T> qa = q1_.forward(x, c1);
  const MatrixX<T> qb = q2_.forward(x, c2);
  const Eigen::Index b = obs.cols();
  const T inv_b = T(1) / static_cast<T>(b);
  T loss = T(0);
  for (Eigen::Index j = 0; j < b; ++j) loss += alpha * s.log_prob[j] - std::min(qa(0, j), qb(0, j));
  loss *= inv_b;
  if (grads == nullptr) return loss;

  const MatrixX<T> ones = MatrixX<T>::Ones(1, b);
  MatrixX<T> dxa, dxb;
  q1_.backward(c1, ones, nullptr, &dxa);
  q2_.backward(c2, ones, nullptr, &dxb);
  MatrixX<T> d_action(action_dim_, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    const MatrixX<T>& dx = qa(0, j) <= qb(0, j) ? dxa : dxb;
    d_action.col(j) = -inv_b * dx.col(j).tail(action_dim_);
  }
  const VectorX<T> d_logp = VectorX<T>::Constant(b, alpha * inv_b);
  actor_.backward(actor_cache, squash_gaussian_backward(s, d_action, d_logp), grads, nullptr);
  return loss;
}

template <typename T>
double SacLearner<T>::alpha_loss(double log_alpha, const VectorX<T>& log_prob, double* grad) const {
  double m = 0.0;
  for (Eigen::Index j = 0; j < log_prob.size(); ++j) m += static_cast<double>(log_prob[j]) + target_entropy_;
  m /= static_cast<double>(log_prob.size());
  if (grad != nullptr) *grad = -m;
  return -log_alpha * m;
}

template <typename T>
typename SacLearner<T>::Losses SacLearner<T>::update(const Batch<T>& batch, Rng& rng) {
  if (batch.obs.rows() != obs_dim_ || batch.action.rows() != action_dim_ || batch.size() == 0) {
    throw ContractError("minibatch does not match the learner dimensions");
  }
  Losses losses;
  const MatrixX<T> eps_pi = draw_noise(batch.size(), rng);
  const MatrixX<T> eps_next = draw_noise(batch.size(), rng);

  // Temperature step uses log pi of the current actor; the value applied
  // below is the one from before this step.
  const double alpha_now = alpha();
  losses.alpha_value = alpha_now;
  {
    typename Mlp<T>::Cache cache;
    const SquashedSample<T> s = squash_gaussian(actor_.forward(batch.obs, cache), eps_pi);
    if (config_.entropy == EntropyMode::kLearned) {
      double g = 0.0;
      losses.alpha = alpha_loss(log_alpha_, s.log_prob, &g);
      alpha_opt_.step(log_alpha_, g, lr_);
    }
  }

  const T a = static_cast<T>(alpha_now);
  const VectorX<T> y = critic_targets(batch, eps_next, a);
  MlpGrads<T> g1, g2;
  losses.critic = critic_loss(batch, y, &g1, &g2);
  q1_opt_.step(q1_, g1, lr_);
  q2_opt_.step(q2_, g2, lr_);

  MlpGrads<T> ga;
  losses.actor = actor_loss(batch.obs, eps_pi, a, &ga);
  actor_opt_.step(actor_, ga, lr_);

  const T tau = static_cast<T>(config_.tau);
  t1_.polyak_update(q1_, tau);
  t2_.polyak_update(q2_, tau);
  return losses;
}

template SquashedSample<float> squash_gaussian(const MatrixX<float>&, const MatrixX<float>&);
template SquashedSample<double> squash_gaussian(const MatrixX<double>&, const MatrixX<double>&);
template MatrixX<float> squash_gaussian_backward(const SquashedSample<float>&, const MatrixX<float>&,
                                                 const VectorX<float>&);
template MatrixX<double> squash_gaussian_backward(const SquashedSample<double>&,
                                                  const MatrixX<double>&, const VectorX<double>&);
template PolicyDraw<float> policy_sample(const Mlp<float>&, const VectorX<float>&, Rng&);
template PolicyDraw<double> policy_sample(const Mlp<double>&, const VectorX<double>&, Rng&);
template VectorX<float> policy_deterministic(const Mlp<float>&, const VectorX<float>&);
template VectorX<double> policy_deterministic(const Mlp<double>&, const VectorX<double>&);
template class SacLearner<float>;
template class SacLearner<double>;

}  // namespace kinfeas
