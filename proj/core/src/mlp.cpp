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

#include "kinfeas/mlp.hpp"

#include <cmath>
#include <string>

#include "kinfeas/error.hpp"

namespace kinfeas {

template <typename T>
Mlp<T>::Mlp(int input_dim, const std::vector<int>& hidden, int output_dim) {
  int prev = input_dim;
  for (int h : hidden) {
    weights_.push_back(Matrix::Zero(h, prev));
    biases_.push_back(Vector::Zero(h));
    prev = h;
  }
  weights_.push_back(Matrix::Zero(output_dim, prev));
  biases_.push_back(Vector::Zero(output_dim));
}

template <typename T>
void Mlp<T>::init_uniform(Rng& rng) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(weights_[l].cols()));
    // Column-major fill order keeps the draw sequence independent of Eigen internals.
    for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
      for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) {
        weights_[l](i, j) = static_cast<T>(rng.uniform(-bound, bound));
      }
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) {
      biases_[l][i] = static_cast<T>(rng.uniform(-bound, bound));
    }
  }
}

template <typename T>
int Mlp<T>::input_dim() const {
  return weights_.empty() ? 0 : static_cast<int>(weights_.front().cols());
}

template <typename T>
int Mlp<T>::output_dim() const {
  return weights_.empty() ? 0 : static_cast<int>(weights_.back().rows());
}

template <typename T>
std::vector<int> Mlp<T>::hidden_sizes() const {
  std::vector<int> out;
  for (std::size_t l = 0; l + 1 < weights_.size(); ++l) out.push_back(static_cast<int>(weights_[l].rows()));
  return out;
}

template <typename T>
typename Mlp<T>::Matrix Mlp<T>::forward(const Matrix& batch) const {
  Cache cache;
  return forward(batch, cache);
}

template <typename T>
typename Mlp<T>::Matrix Mlp<T>::forward(const Matrix& batch, Cache& cache) const {
  if (batch.rows() != input_dim()) {
    throw ContractError("network expects input dimension " + std::to_string(input_dim()) +
                        ", got " + std::to_string(batch.rows()));
  }
  const std::size_t n = weights_.size();
  cache.layer_inputs.resize(n);
  cache.layer_inputs[0] = batch;
  Matrix z;
  for (std::size_t l = 0; l < n; ++l) {
    z.noalias() = weights_[l] * cache.layer_inputs[l];
    z.colwise() += biases_[l];
    if (l + 1 < n) {
      cache.layer_inputs[l + 1] = z.cwiseMax(T(0));
    }
  }
  return z;
}

template <typename T>
typename Mlp<T>::Vector Mlp<T>::forward_one(const Vector& input) const {
  if (input.size() != input_dim()) {
    throw ContractError("network expects input dimension " + std::to_string(input_dim()) +
                        ", got " + std::to_string(input.size()));
  }
  Vector a = input;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Vector z = weights_[l] * a + biases_[l];
    a = l + 1 < weights_.size() ? Vector(z.cwiseMax(T(0))) : z;
  }
  return a;
}

template <typename T>
void Mlp<T>::backward(const Cache& cache, const Matrix& d_out, MlpGrads<T>* grads,
                      Matrix* d_in) const {
  const std::size_t n = weights_.size();
  if (cache.layer_inputs.size() != n) throw ContractError("backward() needs a forward cache");
  if (grads != nullptr) {
    grads->weights.resize(n);
    grads->biases.resize(n);
  }
  Matrix delta = d_out;
  Matrix prev;
  for (std::size_t l = n; l-- > 0;) {
    const Matrix& a = cache.layer_inputs[l];
    if (grads != nullptr) {
      grads->weights[l].noalias() = delta * a.transpose();
      grads->biases[l] = delta.rowwise().sum();
    }
    if (l == 0 && d_in == nullptr) break;
    prev.noalias() = weights_[l].transpose() * delta;
    if (l > 0) {
      delta = (a.array() > T(0)).select(prev, T(0));
    } else {
      *d_in = prev;
    }
  }
}

template <typename T>
MlpGrads<T> Mlp<T>::zero_grads() const {
  MlpGrads<T> g;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    g.weights.push_back(Matrix::Zero(weights_[l].rows(), weights_[l].cols()));
    g.biases.push_back(Vector::Zero(biases_[l].size()));
  }
  return g;
}

template <typename T>
Eigen::Index Mlp<T>::num_params() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

template <typename T>
typename Mlp<T>::Vector Mlp<T>::flat_params() const {
  Vector out(num_params());
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.segment(k, weights_[l].size()) = weights_[l].reshaped();
    k += weights_[l].size();
    out.segment(k, biases_[l].size()) = biases_[l];
    k += biases_[l].size();
  }
  return out;
}

template <typename T>
void Mlp<T>::set_flat_params(const Vector& flat) {
  if (flat.size() != num_params()) throw ContractError("flat parameter vector has the wrong size");
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l].reshaped() = flat.segment(k, weights_[l].size());
    k += weights_[l].size();
    biases_[l] = flat.segment(k, biases_[l].size());
    k += biases_[l].size();
  }
}

template <typename T>
typename Mlp<T>::Vector Mlp<T>::flatten(const MlpGrads<T>& g) {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < g.weights.size(); ++l) n += g.weights[l].size() + g.biases[l].size();
  Vector out(n);
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    out.segment(k, g.weights[l].size()) = g.weights[l].reshaped();
    k += g.weights[l].size();
    out.segment(k, g.biases[l].size()) = g.biases[l];
    k += g.biases[l].size();
  }
  return out;
}

template <typename T>
void Mlp<T>::polyak_update(const Mlp& source, T tau) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] = tau * source.weights_[l] + (T(1) - tau) * weights_[l];
    biases_[l] = tau * source.biases_[l] + (T(1) - tau) * biases_[l];
  }
}

template <typename T>
bool Mlp<T>::operator==(const Mlp& other) const {
  if (weights_.size() != other.weights_.size()) return false;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (weights_[l].rows() != other.weights_[l].rows() ||
        weights_[l].cols() != other.weights_[l].cols() || weights_[l] != other.weights_[l] ||
        biases_[l] != other.biases_[l]) {
      return false;
    }
  }
  return true;
}

template <typename T>
Adam<T>::Adam(const Mlp<T>& net, AdamOptions options)
    : opt_(options), m_(net.zero_grads()), v_(net.zero_grads()) {}

template <typename T>
void Adam<T>::step(Mlp<T>& net, const MlpGrads<T>& grads, double lr) {
  ++t_;
  const T b1 = static_cast<T>(opt_.beta1);
  const T b2 = static_cast<T>(opt_.beta2);
  const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  const T step_size = static_cast<T>(lr / bc1);
  const T inv_sqrt_bc2 = static_cast<T>(1.0 / std::sqrt(bc2));
  const T eps = static_cast<T>(opt_.eps);

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = b1 * m + (T(1) - b1) * g;
    v = b2 * v + (T(1) - b2) * g.cwiseProduct(g);
    param.array() -= step_size * m.array() / ((v.array().sqrt() * inv_sqrt_bc2) + eps);
  };
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    update(net.weights()[l], m_.weights[l], v_.weights[l], grads.weights[l]);
    update(net.biases()[l], m_.biases[l], v_.biases[l], grads.biases[l]);
  }
}

void ScalarAdam::step(double& param, double grad, double lr) {
  ++t_;
  m_ = opt_.beta1 * m_ + (1.0 - opt_.beta1) * grad;
  v_ = opt_.beta2 * v_ + (1.0 - opt_.beta2) * grad * grad;
  const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  param -= lr / bc1 * m_ / (std::sqrt(v_ / bc2) + opt_.eps);
}

template class Mlp<float>;
template class Mlp<double>;
template class Adam<float>;
template class Adam<double>;

}  // namespace kinfeas
