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


#include <cmath>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "grad_check.hpp"
#include "kinfeas/error.hpp"
#include "kinfeas/replay_buffer.hpp"
#include "kinfeas/sac.hpp"

namespace kinfeas {
namespace {

using testing::check_sac_gradients;
using testing::random_batch;

Eigen::MatrixXd actor_output(double mean, double log_std) {
  Eigen::MatrixXd out(2, 1);
  out << mean, log_std;
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

TEST(SquashGaussian, LogProbMatchesDifferentiatedCdf) {
  // P(tanh(u) <= a) = Phi((atanh(a) - m) / s); its numeric derivative is the
  // squashed density.
  for (double m : {-0.7, 0.0, 1.3}) {
    for (double s : {0.2, 0.8, 2.0}) {
      for (double e : {-1.5, -0.3, 0.4, 1.1}) {
        const auto sample = squash_gaussian<double>(actor_output(m, std::log(s)), Eigen::MatrixXd::Constant(1, 1, e));
        const double a = sample.action(0, 0);
        const double da = 1e-6 * (1.0 - a * a);
        const double cdf_hi = normal_cdf((std::atanh(a + da) - m) / s);
        const double cdf_lo = normal_cdf((std::atanh(a - da) - m) / s);
        const double density = (cdf_hi - cdf_lo) / (2.0 * da);
        EXPECT_NEAR(sample.log_prob[0], std::log(density), 1e-3) << m << " " << s << " " << e;
      }
    }
  }
}

TEST(SquashGaussian, DensityIntegratesToOne) {
  const double m = 0.6;
  const double s = 1.4;
  const int n = 20001;
  const double lo = m - 12 * s;
  const double hi = m + 12 * s;
  const double du = (hi - lo) / (n - 1);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = lo + k * du;
    const auto sample = squash_gaussian<double>(actor_output(m, std::log(s)), Eigen::MatrixXd::Constant(1, 1, (u - m) / s));
    const double a = sample.action(0, 0);
    const double weight = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    total += weight * std::exp(sample.log_prob[0]) * (1.0 - a * a) * du;  // da = (1 - a^2) du
  }
  EXPECT_NEAR(total, 1.0, 1e-3);
}

TEST(SquashGaussian, StableForLargePreActivations) {
  const auto s = squash_gaussian<float>(Eigen::MatrixXf(actor_output(30.0, 0.0).cast<float>()),
                                        Eigen::MatrixXf::Constant(1, 1, 2.0F));
  EXPECT_TRUE(std::isfinite(s.log_prob[0]));
  EXPECT_LE(std::abs(s.action(0, 0)), 1.0F);
}

TEST(PolicySample, VanishingStdGivesTanhMean) {
  Rng rng(1);
  Mlp<double> actor(4, {}, 4);
  actor.biases()[0] << 0.3, -0.9, kLogStdMin, kLogStdMin;
  const auto draw = policy_sample(actor, Eigen::VectorXd(Eigen::VectorXd::Zero(4)), rng);
  EXPECT_NEAR(draw.action[0], std::tanh(0.3), 1e-7);
  EXPECT_NEAR(draw.action[1], std::tanh(-0.9), 1e-7);
  const auto det = policy_deterministic(actor, Eigen::VectorXd(Eigen::VectorXd::Zero(4)));
  EXPECT_DOUBLE_EQ(det[0], std::tanh(0.3));
}

TEST(PolicySample, SymmetricNoiseGivesSymmetricActions) {
  Eigen::MatrixXd out(4, 2);
  out.col(0) << 0.0, 0.0, 0.2, -0.5;
  out.col(1) = out.col(0);
  Eigen::MatrixXd eps(2, 2);
  eps.col(0) << 0.7, -1.3;
  eps.col(1) = -eps.col(0);
  const auto s = squash_gaussian<double>(out, eps);
  EXPECT_NEAR((s.action.col(0) + s.action.col(1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(s.log_prob[0], s.log_prob[1], 1e-12);
}

TEST(PolicySample, ActionsStayInUnitBox) {
  Rng rng(2);
  Mlp<float> actor(6, {8}, 6);
  actor.init_uniform(rng);
  actor.weights()[1] *= 50.0F;
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXf obs(6);
    for (int k = 0; k < 6; ++k) obs[k] = static_cast<float>(3.0 * rng.normal());
    const auto d = policy_sample(actor, obs, rng);
    EXPECT_LE(d.action.cwiseAbs().maxCoeff(), 1.0F);
    EXPECT_TRUE(std::isfinite(d.log_prob));
  }
}

TEST(SacGradients, MatchCentralDifferences) {
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    Rng r = rng.split(trial);
    const auto e = check_sac_gradients(r);
    EXPECT_LT(e.actor, 1e-4) << "trial " << trial;
    EXPECT_LT(e.critic1, 1e-4) << "trial " << trial;
    EXPECT_LT(e.critic2, 1e-4) << "trial " << trial;
    EXPECT_LT(e.alpha, 1e-4) << "trial " << trial;
    EXPECT_LE(e.kinks * 100, e.checked) << "trial " << trial;
  }
}

TEST(SacGradients, DiffDriveActionDimension) {
  Rng rng(77);
  EXPECT_LT(check_sac_gradients(rng, 29, 2, 8).max(), 1e-4);
}

TEST(SacGradients, ClampedLogStdBlocksGradient) {
  Eigen::MatrixXd out(2, 1);
  out << 0.1, 5.0;  // above the upper clamp
  const auto s = squash_gaussian<double>(out, Eigen::MatrixXd::Constant(1, 1, 0.5));
  const Eigen::MatrixXd g = squash_gaussian_backward<double>(s, Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1));
  EXPECT_EQ(g(1, 0), 0.0);
  EXPECT_NE(g(0, 0), 0.0);
}

TEST(SacUpdate, UnitTauCopiesOnlineCritics) {
  SacConfig cfg;
  cfg.hidden = {32, 32};
  cfg.tau = 1.0;
  SacLearner<double> learner(10, 3, cfg, Rng(1));
  Rng rng(2);
  learner.update(random_batch(10, 3, 16, rng), rng);
  EXPECT_TRUE(learner.target(0) == learner.critic(0));
  EXPECT_TRUE(learner.target(1) == learner.critic(1));
}

TEST(SacUpdate, PolyakIsExact) {
  SacConfig cfg;
  cfg.hidden = {8};
  cfg.tau = 0.005;
  SacLearner<double> learner(5, 2, cfg, Rng(3));
  const Eigen::VectorXd before = learner.target(0).flat_params();
  Rng rng(4);
  learner.update(random_batch(5, 2, 4, rng), rng);
  const Eigen::VectorXd expected = 0.005 * learner.critic(0).flat_params() + 0.995 * before;
  EXPECT_LT((learner.target(0).flat_params() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SacUpdate, TerminalTargetIsReward) {
  SacConfig cfg;
  cfg.hidden = {16};
  cfg.gamma = 0.0;
  SacLearner<double> learner(6, 2, cfg, Rng(5));
  Rng rng(6);
  Batch<double> b = random_batch(6, 2, 12, rng);
  b.done.setOnes();
  const Eigen::VectorXd y = learner.critic_targets(b, testing::normal_matrix(2, 12, rng), 0.7);
  EXPECT_EQ(y, b.reward);

  SacConfig discounted = cfg;
  discounted.gamma = 0.99;
  SacLearner<double> l2(6, 2, discounted, Rng(5));
  EXPECT_EQ(l2.critic_targets(b, testing::normal_matrix(2, 12, rng), 0.7), b.reward);
}

TEST(SacUpdate, OverfitsSingleTransition) {
  SacConfig cfg;  // default widths and learning rate
  SacLearner<float> learner(28, 3, cfg, Rng(7));
  Rng rng(8);
  Batch<double> one = random_batch(28, 3, 1, rng);
  one.done.setOnes();
  one.reward[0] = -0.4;
  Batch<float> b{one.obs.cast<float>(), one.action.cast<float>(), one.reward.cast<float>(),
                 one.next_obs.cast<float>(), one.done.cast<float>()};
  double first = 0.0;
  double last = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto losses = learner.update(b, rng);
    if (i == 0) first = losses.critic;
    last = losses.critic;
  }
  const Eigen::VectorXf y = learner.critic_targets(b, Eigen::MatrixXf::Zero(3, 1), 0.0F);
  EXPECT_EQ(y[0], -0.4F);
  EXPECT_LT(learner.critic_loss(b, y, nullptr, nullptr), 1e-3F);
  EXPECT_LT(last, first);
}

TEST(SacUpdate, LearnedTemperatureStartsAtConfiguredValue) {
  SacConfig cfg;
  cfg.hidden = {8};
  SacLearner<double> learner(5, 3, cfg, Rng(9));
  EXPECT_DOUBLE_EQ(learner.alpha(), 1.0);
  EXPECT_DOUBLE_EQ(learner.target_entropy(), -3.0);
  Rng rng(10);
  const auto losses = learner.update(random_batch(5, 3, 8, rng), rng);
  EXPECT_DOUBLE_EQ(losses.alpha_value, 1.0);
  EXPECT_NE(learner.alpha(), 1.0);

  cfg.entropy = EntropyMode::kFixed;
  cfg.fixed_alpha = 0.2;
  SacLearner<double> fixed(5, 3, cfg, Rng(9));
  fixed.update(random_batch(5, 3, 8, rng), rng);
  EXPECT_NEAR(fixed.alpha(), 0.2, 1e-15);
}

TEST(SacUpdate, DeterministicGivenSeeds) {
  SacConfig cfg;
  cfg.hidden = {16, 16};
  SacLearner<float> a(12, 3, cfg, Rng(11));
  SacLearner<float> b(12, 3, cfg, Rng(11));
  Rng ra(12);
  Rng rb(12);
  Rng data(13);
  const Batch<double> d = random_batch(12, 3, 32, data);
  const Batch<float> f{d.obs.cast<float>(), d.action.cast<float>(), d.reward.cast<float>(),
                       d.next_obs.cast<float>(), d.done.cast<float>()};
  for (int i = 0; i < 10; ++i) {
    a.update(f, ra);
    b.update(f, rb);
  }
  EXPECT_TRUE(a.actor() == b.actor());
  EXPECT_TRUE(a.critic(1) == b.critic(1));
  EXPECT_EQ(a.log_alpha(), b.log_alpha());
}

TEST(SacUpdate, RejectsMismatchedBatch) {
  SacConfig cfg;
  cfg.hidden = {8};
  SacLearner<double> learner(5, 2, cfg, Rng(1));
  Rng rng(2);
  EXPECT_THROW(learner.update(random_batch(6, 2, 4, rng), rng), ContractError);
}

TEST(SacConfig, DefaultsInsideSearchRanges) {
  EXPECT_TRUE(SacConfig{}.search_range_violations().empty());
  SacConfig bad;
  bad.gamma = 0.5;
  bad.batch_size = 1024;
  EXPECT_EQ(bad.search_range_violations().size(), 2U);
}

TEST(SacConfig, JsonRoundTripAndPartialInput) {
  SacConfig c;
  c.entropy = EntropyMode::kFixed;
  c.fixed_alpha = 0.25;
  c.batch_size = 128;
  const nlohmann::json j = c;
  const SacConfig back = j.get<SacConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
  const SacConfig partial = nlohmann::json{{"gamma", 0.98}}.get<SacConfig>();
  EXPECT_EQ(partial.gamma, 0.98);
  EXPECT_EQ(partial.batch_size, 256);
  EXPECT_EQ(partial.entropy, EntropyMode::kLearned);
  EXPECT_THROW(nlohmann::json({{"entropy", "auto"}}).get<SacConfig>(), ConfigError);
  EXPECT_THROW(nlohmann::json({{"batch_size", "big"}}).get<SacConfig>(), ConfigError);
}

TEST(ReplayBuffer, RingEvictsOldest) {
  ReplayBuffer buf(2, 1, 5);
  for (int i = 0; i < 10; ++i) {
    buf.add({Eigen::Vector2d(i, 0), Eigen::VectorXd::Constant(1, 0.1), static_cast<double>(i),
             Eigen::Vector2d(i + 1, 0), false});
    EXPECT_LE(buf.size(), buf.capacity());
  }
  EXPECT_EQ(buf.size(), 5U);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(buf.at(k).reward, 5.0 + static_cast<double>(k));
}

TEST(ReplayBuffer, DefaultCapacityAndDoubleFill) {
  ReplayBuffer buf(3, 2);
  EXPECT_EQ(buf.capacity(), 100000U);
  const Transition t{Eigen::Vector3d::Zero(), Eigen::Vector2d::Zero(), 0.0, Eigen::Vector3d::Zero(), false};
  for (int i = 0; i < 200000; ++i) buf.add(t);
  EXPECT_EQ(buf.size(), 100000U);
}

TEST(ReplayBuffer, SamplingIsUniform) {
  ReplayBuffer buf(1, 1, 10);
  for (int i = 0; i < 10; ++i) {
    buf.add({Eigen::VectorXd::Constant(1, i), Eigen::VectorXd::Zero(1), 0.0, Eigen::VectorXd::Zero(1), i % 2 == 0});
  }
  Rng rng(3);
  std::vector<int> counts(10, 0);
  const int draws = 2000;
  for (int k = 0; k < draws; ++k) {
    const Batch<float> b = buf.sample<float>(10, rng);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const int idx = static_cast<int>(b.obs(0, j));
      ++counts[idx];
      EXPECT_EQ(b.done[j], idx % 2 == 0 ? 1.0F : 0.0F);
    }
  }
  // Chi-square with 9 degrees of freedom; 27.9 is the 0.999 quantile.
  const double expected = draws;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 27.9);
}

TEST(ReplayBuffer, Contracts) {
  ReplayBuffer buf(2, 1, 4);
  Rng rng(1);
  EXPECT_THROW(buf.sample<double>(1, rng), ContractError);
  EXPECT_THROW(buf.add({Eigen::Vector3d::Zero(), Eigen::VectorXd::Zero(1), 0.0, Eigen::Vector2d::Zero(), false}),
               ContractError);
}

}  // namespace
}  // namespace kinfeas
