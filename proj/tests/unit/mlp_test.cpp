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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "xmix/error.hpp"
#include "xmix/nn/adam.hpp"
#include "xmix/nn/checkpoint.hpp"
#include "xmix/nn/mlp.hpp"
#include "xmix/rng.hpp"

namespace xmix {
namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Central differences of upstream . f(input) on a random subset of params.
double max_rel_error(MlpParams params, const std::vector<double>& input,
                     const std::vector<double>& upstream, Rng& rng,
                     std::size_t probes) {
  const BackwardSample sample{input, upstream};
  const MlpParams grads = backward(params, std::span(&sample, 1));
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    const std::size_t i = rng.below(params.size());
    const double saved = params.flat()[i];
    params.flat()[i] = saved + h;
    const double up = dot(upstream, mlp_forward(params, input));
    params.flat()[i] = saved - h;
    const double down = dot(upstream, mlp_forward(params, input));
    params.flat()[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = grads.flat()[i];
    const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
    worst = std::max(worst, std::abs(numeric - analytic) / scale);
  }
  return worst;
}

TEST(Mlp, GradientsMatchFiniteDifferences) {
  Rng rng(11);
  for (int c = 0; c < 20; ++c) {
    const std::size_t in = 4 + rng.below(8);
    const std::size_t out = c % 2 == 0 ? 1 + rng.below(4) : 1;
    MlpParams p = init_mlp({in, 16, 16, out}, rng, false);
    // Non-zero biases so every parameter group is exercised.
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
      for (double& b : p.bias(l)) b = rng.uniform(-0.5, 0.5);
    }
    const auto x = random_vec(rng, in, -1.0, 1.0);
    const auto u = random_vec(rng, out, -1.0, 1.0);
    EXPECT_LT(max_rel_error(p, x, u, rng, 300), 1e-4) << "case " << c;
  }
}

TEST(Mlp, ZeroUpstreamGivesZeroGradients) {
  Rng rng(1);
  const MlpParams p = init_mlp({3, 8, 8, 2}, rng, false);
  const BackwardSample s{{0.1, 0.2, 0.3}, {0.0, 0.0}};
  const MlpParams g = backward(p, std::span(&s, 1));
  EXPECT_TRUE(std::all_of(g.flat().begin(), g.flat().end(),
                          [](double v) { return v == 0.0; }));
}

TEST(Mlp, BatchGradientIsSumOfSamples) {
  Rng rng(2);
  const MlpParams p = init_mlp({3, 8, 8, 2}, rng, false);
  const BackwardSample a{{0.1, -0.2, 0.3}, {1.0, -0.5}};
  const BackwardSample b{{-0.7, 0.4, 0.0}, {0.25, 2.0}};
  const std::vector<BackwardSample> both{a, b};
  const MlpParams ga = backward(p, std::span(&a, 1));
  const MlpParams gb = backward(p, std::span(&b, 1));
  const MlpParams gab = backward(p, both);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(gab.flat()[i], ga.flat()[i] + gb.flat()[i], 1e-12);
  }
  EXPECT_THROW(backward(p, std::span<const BackwardSample>()), PreconditionError);
}

TEST(Policy, ZeroFinalLayerIsUniform) {
  Rng rng(3);
  const MlpParams p = init_mlp(policy_dims(10, 4), rng, true);
  Observation obs;
  obs.features = random_vec(rng, 10, -1.0, 1.0);
  obs.mask = {1, 1, 1, 1};
  const PolicyOutput out = policy_forward(p, obs);
  for (double pr : out.probs) EXPECT_DOUBLE_EQ(pr, 0.25);
  EXPECT_NEAR(out.entropy, std::log(4.0), 1e-9);
}

TEST(Policy, SingleValidAction) {
  const std::vector<double> logits{0.3, 5.0};
  const std::vector<std::uint8_t> mask{1, 0};
  const PolicyOutput out = masked_softmax(logits, mask);
  EXPECT_EQ(out.probs, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(out.entropy, 0.0);
  EXPECT_EQ(out.log_probs[1], -std::numeric_limits<double>::infinity());
}

TEST(Policy, MaskedLogitsNeverMatter) {
  Rng rng(4);
  for (int c = 0; c < 50; ++c) {
    auto logits = random_vec(rng, 5, -3.0, 3.0);
    std::vector<std::uint8_t> mask(5);
    for (auto& m : mask) m = rng.below(2);
    mask[rng.below(5)] = 1;
    const PolicyOutput a = masked_softmax(logits, mask);
    double sum = 0.0;
    for (double pr : a.probs) sum += pr;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (std::size_t i = 0; i < 5; ++i) {
      if (!mask[i]) logits[i] = rng.uniform(-50.0, 50.0);
    }
    const PolicyOutput b = masked_softmax(logits, mask);
    EXPECT_EQ(a.probs, b.probs);
    const double v = static_cast<double>(std::count(mask.begin(), mask.end(), 1));
    EXPECT_GE(a.entropy, 0.0);
    EXPECT_LE(a.entropy, std::log(v) + 1e-12);
  }
}

TEST(Policy, UniformEntropyIsLogV) {
  for (std::size_t v = 1; v <= 8; ++v) {
    const std::vector<double> logits(8, 0.7);
    std::vector<std::uint8_t> mask(8, 0);
    std::fill_n(mask.begin(), v, 1);
    EXPECT_NEAR(masked_softmax(logits, mask).entropy, std::log(static_cast<double>(v)),
                1e-9);
  }
}

TEST(Policy, AllFalseMaskThrows) {
  const std::vector<double> logits{0.0, 0.0};
  const std::vector<std::uint8_t> mask{0, 0};
  EXPECT_THROW(masked_softmax(logits, mask), PreconditionError);
}

TEST(Value, ZeroFinalLayerAndRepeatability) {
  Rng rng(5);
  MlpParams p = init_mlp(value_dims(6), rng, true);
  Observation obs;
  obs.features = random_vec(rng, 6, -10.0, 10.0);
  EXPECT_EQ(value_forward(p, obs), 0.0);
  p = init_mlp(value_dims(6), rng, false);
  const double v = value_forward(p, obs);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(v, value_forward(p, obs));
  obs.features.push_back(0.0);
  EXPECT_THROW(value_forward(p, obs), PreconditionError);
}

TEST(Adam, SingleStepMovesByLr) {
  MlpParams p({1, 1});
  p.set_zero();
  MlpParams g({1, 1});
  g.set_zero();
  g.weights(0)[0] = 1.0;
  AdamState s = AdamState::for_params(p);
  adam_step(p, g, s, 3e-4);
  // m_hat = 1, v_hat = 1: the step is lr / (1 + eps).
  EXPECT_NEAR(p.weights(0)[0], -3e-4 / (1.0 + 1e-8), 1e-18);
  EXPECT_EQ(p.bias(0)[0], 0.0);
  EXPECT_EQ(s.step, 1);
}

TEST(Adam, ZeroGradsLeaveParamsUnchanged) {
  Rng rng(6);
  MlpParams p = init_mlp({3, 4, 2}, rng, false);
  const MlpParams before = p;
  MlpParams g({3, 4, 2});
  g.set_zero();
  AdamState s = AdamState::for_params(p);
  for (int i = 0; i < 3; ++i) adam_step(p, g, s, 1e-2);
  EXPECT_EQ(p, before);
}

TEST(Adam, NonFiniteGradientFailsFast) {
  Rng rng(7);
  MlpParams p = init_mlp({3, 4, 2}, rng, false);
  const MlpParams before = p;
  MlpParams g({3, 4, 2});
  g.set_zero();
  g.flat()[5] = std::numeric_limits<double>::quiet_NaN();
  AdamState s = AdamState::for_params(p);
  const AdamState s_before = s;
  EXPECT_THROW(adam_step(p, g, s, 1e-3), NumericError);
  EXPECT_EQ(p, before);
  EXPECT_EQ(s, s_before);
}

TEST(Adam, IdenticalRunsIdenticalTrajectories) {
  auto run = [] {
    Rng rng(8);
    MlpParams p = init_mlp({4, 8, 8, 3}, rng, false);
    AdamState s = AdamState::for_params(p);
    for (int t = 0; t < 10; ++t) {
      BackwardSample b{random_vec(rng, 4, -1, 1), random_vec(rng, 3, -1, 1)};
      adam_step(p, backward(p, std::span(&b, 1)), s, 1e-3);
    }
    return p;
  };
  EXPECT_EQ(run(), run());
}

TEST(Checkpoint, JsonRoundTripIsExact) {
  Rng rng(9);
  const MlpParams p = init_mlp(policy_dims(10, 4, 16), rng, false);
  EXPECT_EQ(params_from_json(params_to_json(p)), p);
  EXPECT_THROW(params_from_json("{}"), FormatError);
  EXPECT_THROW(params_from_json("[1,2"), FormatError);
}

}  // namespace
}  // namespace xmix
