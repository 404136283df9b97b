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


#include "kinfeas/replay_buffer.hpp"

#include "kinfeas/error.hpp"

namespace kinfeas {

ReplayBuffer::ReplayBuffer(int obs_dim, int action_dim, std::size_t capacity)
    : capacity_(capacity) {
  if (capacity == 0 || obs_dim <= 0 || action_dim <= 0) {
    throw ContractError("replay buffer needs positive capacity and dimensions");
  }
  const auto n = static_cast<Eigen::Index>(capacity);
  obs_.resize(obs_dim, n);
  action_.resize(action_dim, n);
  reward_.resize(n);
  next_obs_.resize(obs_dim, n);
  done_.resize(n);
}

void ReplayBuffer::add(const Transition& t) {
  if (t.obs.size() != obs_.rows() || t.next_obs.size() != obs_.rows() ||
      t.action.size() != action_.rows()) {
    throw ContractError("transition dimensions do not match the replay buffer");
  }
  const auto k = static_cast<Eigen::Index>(next_);
  obs_.col(k) = t.obs;
  action_.col(k) = t.action;
  reward_[k] = t.reward;
  next_obs_.col(k) = t.next_obs;
  done_[k] = t.done ? 1.0 : 0.0;
  next_ = (next_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw ContractError("replay buffer index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : next_;
  const auto k = static_cast<Eigen::Index>((oldest + i) % capacity_);
  return {obs_.col(k), action_.col(k), reward_[k], next_obs_.col(k), done_[k] != 0.0};
}

template <typename T>
Batch<T> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (size_ == 0) throw ContractError("cannot sample from an empty replay buffer");
  const auto b = static_cast<Eigen::Index>(batch_size);
  Batch<T> out;
  out.obs.resize(obs_.rows(), b);
  out.action.resize(action_.rows(), b);
  out.reward.resize(b);
  out.next_obs.resize(obs_.rows(), b);
  out.done.resize(b);
  for (Eigen::Index j = 0; j < b; ++j) {
    const auto k = static_cast<Eigen::Index>(rng.below(size_));
    out.obs.col(j) = obs_.col(k).cast<T>();
    out.action.col(j) = action_.col(k).cast<T>();
    out.reward[j] = static_cast<T>(reward_[k]);
    out.next_obs.col(j) = next_obs_.col(k).cast<T>();
    out.done[j] = static_cast<T>(done_[k]);
  }
  return out;
}

template Batch<float> ReplayBuffer::sample<float>(std::size_t, Rng&) const;
template Batch<double> ReplayBuffer::sample<double>(std::size_t, Rng&) const;

}  // namespace kinfeas
