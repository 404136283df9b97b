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

// Fully connected networks with ReLU hidden layers and a linear output,
// evaluated column-per-sample, with hand-written reverse mode and Adam.
//
// Instantiated for float (training) and double (gradient checking).

#ifndef KINFEAS_MLP_HPP_
#define KINFEAS_MLP_HPP_

#include <vector>

#include <Eigen/Core>

#include "kinfeas/rng.hpp"

namespace kinfeas {

template <typename T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
struct MlpGrads {
  std::vector<MatrixX<T>> weights;
  std::vector<VectorX<T>> biases;
};

template <typename T>
class Mlp {
 public:
  using Matrix = MatrixX<T>;
  using Vector = VectorX<T>;

  // Post-activation outputs of each layer; layer_inputs[0] is the input batch.
  struct Cache {
    std::vector<Matrix> layer_inputs;
  };

  Mlp() = default;
  // Zero-initialized network.
  Mlp(int input_dim, const std::vector<int>& hidden, int output_dim);

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void init_uniform(Rng& rng);

  int input_dim() const;
  int output_dim() const;
  int num_layers() const { return static_cast<int>(weights_.size()); }
  std::vector<int> hidden_sizes() const;

  // batch: input_dim x B. Throws ContractError on a dimension mismatch.
  Matrix forward(const Matrix& batch) const;
  Matrix forward(const Matrix& batch, Cache& cache) const;
  Vector forward_one(const Vector& input) const;

  // Reverse pass for upstream gradient `d_out` (output_dim x B). Writes
  // parameter gradients into `grads` and the input gradient into `d_in`;
  // either may be null.
  void backward(const Cache& cache, const Matrix& d_out, MlpGrads<T>* grads, Matrix* d_in) const;

  MlpGrads<T> zero_grads() const;

  std::vector<Matrix>& weights() { return weights_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  std::vector<Vector>& biases() { return biases_; }
  const std::vector<Vector>& biases() const { return biases_; }

  Eigen::Index num_params() const;
  Vector flat_params() const;
  void set_flat_params(const Vector& flat);
  static Vector flatten(const MlpGrads<T>& grads);

  // this <- tau * source + (1 - tau) * this
  void polyak_update(const Mlp& source, T tau);

  template <typename U>
  Mlp<U> cast() const {
    Mlp<U> out;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      out.weights().push_back(weights_[i].template cast<U>());
      out.biases().push_back(biases_[i].template cast<U>());
    }
    return out;
  }

  bool operator==(const Mlp& other) const;

 private:
  std::vector<Matrix> weights_;  // out x in
  std::vector<Vector> biases_;
};

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam moments for one network.
template <typename T>
class Adam {
 public:
  Adam() = default;
  explicit Adam(const Mlp<T>& net, AdamOptions options = {});

  void step(Mlp<T>& net, const MlpGrads<T>& grads, double lr);
  long steps() const { return t_; }

 private:
  AdamOptions opt_;
  MlpGrads<T> m_;
  MlpGrads<T> v_;
  long t_ = 0;
};

// Adam for a single scalar parameter.
class ScalarAdam {
 public:
  explicit ScalarAdam(AdamOptions options = {}) : opt_(options) {}
  void step(double& param, double grad, double lr);

 private:
  AdamOptions opt_;
  double m_ = 0.0;
  double v_ = 0.0;
  long t_ = 0;
};

extern template class Mlp<float>;
extern template class Mlp<double>;
extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace kinfeas

#endif  // KINFEAS_MLP_HPP_
