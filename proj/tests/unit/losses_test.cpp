// Copyright 2026 The expertmix Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "xmix/error.hpp"
#include "xmix/nn/mlp.hpp"
#include "xmix/ppo/losses.hpp"
#include "xmix/rng.hpp"

namespace xmix {
namespace {

// R_t summed term by term, as written.
std::vector<double> direct_returns(const std::vector<double>& r, double tail,
                                   double gamma) {
  const std::size_t T = r.size();
  std::vector<double> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k + t < T; ++k) s += std::pow(gamma, k) * r[t + k];
    out[t] = s + std::pow(gamma, static_cast<double>(T - t)) * tail;
  }
  return out;
}

TEST(Returns, HandCases) {
  EXPECT_EQ(bootstrapped_returns(std::vector<double>{1, 1, 1}, 2.0, 0.5),
            (std::vector<double>{2.0, 2.0, 2.0}));
  EXPECT_DOUBLE_EQ(bootstrapped_returns(std::vector<double>{5}, 10.0, 0.9)[0], 14.0);
  const std::vector<double> r{0.3, -1.0, 4.0};
  EXPECT_EQ(bootstrapped_returns(r, 7.0, 0.0), r);
}

TEST(Returns, MatchDirectSummation) {
  Rng rng(31);
  const double gammas[] = {0.0, 0.5, 0.9, 0.99};
  for (int c = 0; c < 100; ++c) {
    std::vector<double> r(1 + rng.below(20));
    for (double& x : r) x = rng.uniform(-2.0, 11.0);
    const double tail = rng.uniform(-5.0, 5.0);
    const double gamma = gammas[c % 4];
    const auto got = bootstrapped_returns(r, tail, gamma);
    const auto want = direct_returns(r, tail, gamma);
    for (std::size_t t = 0; t < r.size(); ++t) EXPECT_NEAR(got[t], want[t], 1e-9);
  }
}

TEST(Returns, ArrivalBootstrapsZero) {
  Rng rng(1);
  MlpParams v = init_mlp(value_dims(4), rng, false);
  v.bias(v.layer_count() - 1)[0] = 3.0;
  Trajectory t;
  t.transitions.resize(2);
  t.transitions[0].reward = 1.0;
  t.transitions[1].reward = 2.0;
  t.terminal_obs.features = {0.1, 0.2, 0.3, 0.4};
  t.junction_path = {0, 1, 2};
  const double tail = value_forward(v, t.terminal_obs);
  t.arrived = false;
  EXPECT_DOUBLE_EQ(bootstrapped_returns(t, v, 0.5)[1], 2.0 + 0.5 * tail);
  t.arrived = true;
  EXPECT_DOUBLE_EQ(bootstrapped_returns(t, v, 0.5)[1], 2.0);
}

TEST(Advantages, RawAndStandardized) {
  EXPECT_EQ(advantages(std::vector<double>{2, 2}, std::vector<double>{2, 2}),
            (std::vector<double>{0, 0}));
  EXPECT_EQ(advantages(std::vector<double>{3, 1}, std::vector<double>{1, 1}),
            (std::vector<double>{2, 0}));
  const auto s = standardize(std::vector<double>{2, 0});
  EXPECT_NEAR(s[0], 1.0, 1e-7);
  EXPECT_NEAR(s[1], -1.0, 1e-7);
  EXPECT_THROW(advantages(std::vector<double>{1}, std::vector<double>{1, 2}),
               PreconditionError);

  Rng rng(2);
  for (int c = 0; c < 20; ++c) {
    std::vector<double> a(2 + rng.below(30));
    for (double& x : a) x = rng.uniform(-5, 5);
    const auto z = standardize(a);
    EXPECT_NEAR(std::accumulate(z.begin(), z.end(), 0.0) / z.size(), 0.0, 1e-9);
  }
}

TEST(Advantages, RawEqualsReturnsMinusValues) {
  Rng rng(3);
  const MlpParams v = init_mlp(value_dims(3), rng, false);
  Trajectory t;
  for (int i = 0; i < 5; ++i) {
    Transition tr;
    tr.obs.features = {rng.uniform(), rng.uniform(), rng.uniform()};
    tr.reward = rng.uniform(-1, 1);
    t.transitions.push_back(tr);
  }
  t.terminal_obs.features = {0.0, 0.5, 1.0};
  const ReturnsAndAdvantages ra = returns_and_advantages(t, v, 0.9);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(ra.advantages[i], ra.returns[i] - value_forward(v, t.transitions[i].obs));
  }
}

TEST(ValueLoss, HandCases) {
  EXPECT_EQ(value_loss(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  EXPECT_DOUBLE_EQ(value_loss(std::vector<double>{1, 2}, std::vector<double>{1, 4}), 2.0);
  EXPECT_DOUBLE_EQ(value_loss(std::vector<double>{0}, std::vector<double>{3}), 9.0);
  EXPECT_THROW(value_loss(std::vector<double>{}, std::vector<double>{}), PreconditionError);
}

TEST(Surrogate, HandCasesAndIdentity) {
  const std::vector<double> zero{0.0};
  EXPECT_DOUBLE_EQ(clipped_surrogate(std::vector<double>{std::log(1.5)}, zero,
                                     std::vector<double>{1.0}, 0.2),
                   1.2);
  EXPECT_DOUBLE_EQ(clipped_surrogate(std::vector<double>{std::log(0.5)}, zero,
                                     std::vector<double>{-1.0}, 0.2),
                   -0.8);
  Rng rng(4);
  for (int c = 0; c < 50; ++c) {
    std::vector<double> lp(1 + rng.below(30)), adv(lp.size());
    for (double& x : lp) x = -rng.uniform(0.0, 3.0);
    for (double& x : adv) x = rng.uniform(-3.0, 3.0);
    const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / adv.size();
    EXPECT_NEAR(clipped_surrogate(lp, lp, adv, rng.uniform(0.05, 0.95)), mean, 1e-12);
  }
}

TEST(Surrogate, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  for (int c = 0; c < 30; ++c) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<double> lp_new(n), lp_old(n), adv(n);
    for (std::size_t i = 0; i < n; ++i) {
      lp_old[i] = -rng.uniform(0.1, 2.0);
      lp_new[i] = lp_old[i] + rng.uniform(-0.5, 0.5);
      adv[i] = rng.uniform(-2.0, 2.0);
    }
    const auto g = clipped_surrogate_grad(lp_new, lp_old, adv, 0.2);
    const double h = 1e-7;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = std::exp(lp_new[i] - lp_old[i]);
      // Kinks of min/clip: skip points within h of a boundary.
      if (std::abs(ratio - 1.2) < 1e-4 || std::abs(ratio - 0.8) < 1e-4) continue;
      auto up = lp_new, down = lp_new;
      up[i] += h;
      down[i] -= h;
      const double fd = (clipped_surrogate(up, lp_old, adv, 0.2) -
                         clipped_surrogate(down, lp_old, adv, 0.2)) /
                        (2 * h);
      EXPECT_NEAR(g[i], fd, 1e-6);
    }
  }
}

TEST(Alpha, Laws) {
  EXPECT_EQ(alpha_weight(1, 10, 0.0), 1.0);
  EXPECT_EQ(alpha_weight(10, 10, 0.0), 1.0);
  EXPECT_NEAR(alpha_weight(10, 10, std::log(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(alpha_weight(1, 100, 189.91), 0.1497, 1e-4);
  EXPECT_THROW(alpha_weight(1, 10, -1.0), PreconditionError);
  EXPECT_THROW(alpha_weight(0, 10, 1.0), PreconditionError);
  EXPECT_THROW(alpha_weight(11, 10, 1.0), PreconditionError);
  double prev = 2.0;
  for (int i = 0; i <= 100; ++i) {
    const double a = alpha_weight(5, 10, i * 0.5);
    EXPECT_GT(a, 0.0);
    EXPECT_LE(a, 1.0);
    EXPECT_LT(a, prev);
    prev = a;
  }
  prev = 2.0;
  for (int k = 1; k <= 100; ++k) {
    const double a = alpha_weight(k, 100, 3.0);
    EXPECT_LT(a, prev);
    prev = a;
  }
  // Stays strictly positive where exp() underflows.
  EXPECT_GT(alpha_weight(10, 10, 1e6), 0.0);
}

TEST(Objectives, Mixing) {
  EXPECT_EQ(mixed_policy_objective(0.7, 123.0, 1.0), 0.7);
  EXPECT_DOUBLE_EQ(mixed_policy_objective(2.0, 0.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(mixed_policy_objective(1.0, 2.0, 0.2), 1.8);
  EXPECT_EQ(total_policy_objective(0.4, 0.0, 0.01), 0.4);
  EXPECT_NEAR(total_policy_objective(1.0, std::log(4.0), 0.5), 1.6931, 1e-4);
}

TEST(LogitGrads, MatchFiniteDifferences) {
  Rng rng(6);
  for (int c = 0; c < 30; ++c) {
    std::vector<double> logits(4);
    for (double& x : logits) x = rng.uniform(-2, 2);
    std::vector<std::uint8_t> mask{1, 1, 1, 1};
    mask[rng.below(4)] = rng.below(2);
    const PolicyOutput out = masked_softmax(logits, mask);
    int action = 0;
    while (!mask[action]) ++action;
    const auto glp = log_prob_logit_grad(out, action);
    const auto gh = entropy_logit_grad(out);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!mask[i]) {
        EXPECT_EQ(glp[i], 0.0);
        EXPECT_EQ(gh[i], 0.0);
        continue;
      }
      auto up = logits, down = logits;
      up[i] += h;
      down[i] -= h;
      const PolicyOutput pu = masked_softmax(up, mask);
      const PolicyOutput pd = masked_softmax(down, mask);
      EXPECT_NEAR(glp[i], (pu.log_probs[action] - pd.log_probs[action]) / (2 * h), 1e-7);
      EXPECT_NEAR(gh[i], (pu.entropy - pd.entropy) / (2 * h), 1e-7);
    }
  }
}

}  // namespace
}  // namespace xmix
