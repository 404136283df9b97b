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


#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "kinfeas/error.hpp"
#include "kinfeas/mlp.hpp"

namespace kinfeas {
namespace {

using MlpD = Mlp<double>;

// Scalar-loop forward pass, independent of the Eigen expressions in Mlp.
Eigen::VectorXd naive_forward(const MlpD& net, const Eigen::VectorXd& x) {
  std::vector<double> a(x.data(), x.data() + x.size());
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto& w = net.weights()[l];
    const auto& b = net.biases()[l];
    std::vector<double> z(w.rows(), 0.0);
    for (int i = 0; i < w.rows(); ++i) {
      double s = b[i];
      for (int j = 0; j < w.cols(); ++j) s += w(i, j) * a[j];
      z[i] = (l + 1 < net.num_layers()) ? std::max(0.0, s) : s;
    }
    a = z;
  }
  return Eigen::Map<Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

TEST(Mlp, ShapesAndZeroInit) {
  const MlpD net(5, {8, 4}, 3);
  EXPECT_EQ(net.input_dim(), 5);
  EXPECT_EQ(net.output_dim(), 3);
  EXPECT_EQ(net.hidden_sizes(), (std::vector<int>{8, 4}));
  EXPECT_EQ(net.num_params(), 5 * 8 + 8 + 8 * 4 + 4 + 4 * 3 + 3);
  EXPECT_TRUE(net.forward_one(Eigen::VectorXd::Ones(5)).isZero());
  EXPECT_THROW(net.forward_one(Eigen::VectorXd::Ones(4)), ContractError);
}

TEST(Mlp, IdentityLayerPassesInputThrough) {
  MlpD net(3, {}, 3);
  net.weights()[0] = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::Vector3d x(0.5, -2.0, 7.0);
  EXPECT_EQ(net.forward_one(x), x);
}

TEST(Mlp, MatchesNaiveOracle) {
  Rng rng(1);
  MlpD net(6, {16, 9}, 4);
  net.init_uniform(rng);
  Eigen::MatrixXd batch(6, 10);
  for (Eigen::Index i = 0; i < batch.size(); ++i) batch.data()[i] = rng.normal();
  const Eigen::MatrixXd out = net.forward(batch);
  for (int c = 0; c < 10; ++c) {
    const Eigen::VectorXd expected = naive_forward(net, batch.col(c));
    EXPECT_LT((out.col(c) - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((net.forward_one(batch.col(c)) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Mlp, FloatMatchesDoubleOracle) {
  Rng rng(2);
  MlpD net(6, {32, 32}, 2);
  net.init_uniform(rng);
  const Mlp<float> fnet = net.cast<float>();
  Eigen::VectorXd x(6);
  for (int i = 0; i < 6; ++i) x[i] = rng.normal();
  const Eigen::VectorXd ref = naive_forward(fnet.cast<double>(), x);
  const Eigen::VectorXf out = fnet.forward_one(x.cast<float>());
  EXPECT_LT((out.cast<double>() - ref).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Mlp, ZeroUpstreamGivesZeroGradients) {
  Rng rng(3);
  MlpD net(4, {5}, 2);
  net.init_uniform(rng);
  MlpD::Cache cache;
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 3);
  net.forward(x, cache);
  MlpGrads<double> g;
  Eigen::MatrixXd d_in;
  net.backward(cache, Eigen::MatrixXd::Zero(2, 3), &g, &d_in);
  EXPECT_TRUE(MlpD::flatten(g).isZero());
  EXPECT_TRUE(d_in.isZero());
}

TEST(Mlp, LinearNetGradientIsOuterProduct) {
  Rng rng(4);
  MlpD net(3, {}, 2);
  net.init_uniform(rng);
  const Eigen::Vector3d x(1.0, -2.0, 0.5);
  const Eigen::Vector2d up(0.3, -0.7);
  MlpD::Cache cache;
  net.forward(x, cache);
  MlpGrads<double> g;
  Eigen::MatrixXd d_in;
  net.backward(cache, up, &g, &d_in);
  EXPECT_TRUE(g.weights[0].isApprox(up * x.transpose(), 1e-15));
  EXPECT_TRUE(g.biases[0].isApprox(up, 1e-15));
  EXPECT_TRUE(d_in.isApprox(net.weights()[0].transpose() * up, 1e-15));
}

TEST(Mlp, GradientsMatchCentralDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    MlpD net(7, {12, 10}, 3);
    net.init_uniform(rng);
    Eigen::MatrixXd x(7, 6);
    Eigen::MatrixXd up(3, 6);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    for (Eigen::Index i = 0; i < up.size(); ++i) up.data()[i] = rng.normal();
    auto loss = [&](const MlpD& n, const Eigen::MatrixXd& in) { return (n.forward(in).array() * up.array()).sum(); };

    MlpD::Cache cache;
    net.forward(x, cache);
    MlpGrads<double> g;
    Eigen::MatrixXd d_in;
    net.backward(cache, up, &g, &d_in);
    const Eigen::VectorXd analytic = MlpD::flatten(g);
    const Eigen::VectorXd theta = net.flat_params();

    const double h = 1e-5;
    double worst = 0.0;
    MlpD probe = net;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[k] += h;
      tm[k] -= h;
      probe.set_flat_params(tp);
      const double lp = loss(probe, x);
      probe.set_flat_params(tm);
      const double lm = loss(probe, x);
      worst = std::max(worst, rel_err((lp - lm) / (2 * h), analytic[k]));
    }
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      Eigen::MatrixXd xp = x, xm = x;
      xp.data()[k] += h;
      xm.data()[k] -= h;
      worst = std::max(worst, rel_err((loss(net, xp) - loss(net, xm)) / (2 * h), d_in.data()[k]));
    }
    EXPECT_LT(worst, 1e-4) << "trial " << trial;
  }
}

TEST(Mlp, FlatParamsRoundTripAndPolyak) {
  Rng rng(6);
  MlpD a(3, {4}, 2);
  MlpD b(3, {4}, 2);
  a.init_uniform(rng);
  b.init_uniform(rng);
  MlpD c(3, {4}, 2);
  c.set_flat_params(a.flat_params());
  EXPECT_TRUE(c == a);
  const Eigen::VectorXd expected = 0.25 * b.flat_params() + 0.75 * a.flat_params();
  c.polyak_update(b, 0.25);
  EXPECT_TRUE(c.flat_params().isApprox(expected, 1e-15));
  c.polyak_update(b, 1.0);
  EXPECT_TRUE(c == b);
}

TEST(Mlp, InitIsDeterministicAndBounded) {
  Rng r1(7);
  Rng r2(7);
  MlpD a(10, {20}, 5);
  MlpD b(10, {20}, 5);
  a.init_uniform(r1);
  b.init_uniform(r2);
  EXPECT_TRUE(a == b);
  EXPECT_LE(a.weights()[0].cwiseAbs().maxCoeff(), 1.0 / std::sqrt(10.0));
  EXPECT_LE(a.weights()[1].cwiseAbs().maxCoeff(), 1.0 / std::sqrt(20.0));
}

TEST(Adam, FirstStepMovesBySignTimesLr) {
  MlpD net(2, {}, 1);
  Adam<double> opt(net);
  MlpGrads<double> g = net.zero_grads();
  g.weights[0] << 3.0, -0.01;
  g.biases[0] << 0.0;
  opt.step(net, g, 0.1);
  // Bias-corrected first step is lr * g / (|g| + eps).
  EXPECT_NEAR(net.weights()[0](0, 0), -0.1, 1e-6);
  EXPECT_NEAR(net.weights()[0](0, 1), 0.1, 1e-5);
  EXPECT_EQ(net.biases()[0][0], 0.0);

  double p = 1.0;
  ScalarAdam sa;
  sa.step(p, -2.0, 0.01);
  EXPECT_NEAR(p, 1.01, 1e-8);
}

TEST(Adam, MinimizesQuadratic) {
  MlpD net(1, {}, 1);
  net.weights()[0](0, 0) = 5.0;
  Adam<double> opt(net);
  for (int i = 0; i < 2000; ++i) {
    MlpGrads<double> g = net.zero_grads();
    g.weights[0](0, 0) = 2.0 * (net.weights()[0](0, 0) - 1.5);
    opt.step(net, g, 0.05);
  }
  EXPECT_NEAR(net.weights()[0](0, 0), 1.5, 1e-3);
}

}  // namespace
}  // namespace kinfeas
