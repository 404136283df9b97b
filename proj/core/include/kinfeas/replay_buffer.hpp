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


#ifndef KINFEAS_REPLAY_BUFFER_HPP_
#define KINFEAS_REPLAY_BUFFER_HPP_

#include <cstddef>

#include <Eigen/Core>

#include "kinfeas/mlp.hpp"
#include "kinfeas/rng.hpp"

namespace kinfeas {

struct Transition {
  Eigen::VectorXd obs;
  Eigen::VectorXd action;  // normalized, in [-1, 1]
  double reward = 0.0;
  Eigen::VectorXd next_obs;
  // Set only for true terminations; time-limit truncation keeps bootstrapping.
  bool done = false;
};

// Column-per-sample minibatch.
template <typename T>
struct Batch {
  MatrixX<T> obs;
  MatrixX<T> action;
  VectorX<T> reward;
  MatrixX<T> next_obs;
  VectorX<T> done;  // 0 or 1

  Eigen::Index size() const { return obs.cols(); }
};

// Fixed-capacity ring buffer; once full, each insert overwrites the oldest item.
class ReplayBuffer {
 public:
  ReplayBuffer(int obs_dim, int action_dim, std::size_t capacity = 100000);

  void add(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int obs_dim() const { return static_cast<int>(obs_.rows()); }
  int action_dim() const { return static_cast<int>(action_.rows()); }

  // Item i in insertion order among the stored ones (0 = oldest).
  Transition at(std::size_t i) const;

  // Uniform sampling with replacement. Throws ContractError if empty.
  template <typename T>
  Batch<T> sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  Eigen::MatrixXd obs_;
  Eigen::MatrixXd action_;
  Eigen::VectorXd reward_;
  Eigen::MatrixXd next_obs_;
  Eigen::VectorXd done_;
};

extern template Batch<float> ReplayBuffer::sample<float>(std::size_t, Rng&) const;
extern template Batch<double> ReplayBuffer::sample<double>(std::size_t, Rng&) const;

}  // namespace kinfeas

#endif  // KINFEAS_REPLAY_BUFFER_HPP_
