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

#ifndef XMIX_PPO_LOSSES_HPP_
#define XMIX_PPO_LOSSES_HPP_

#include <span>
#include <vector>

#include "xmix/dtw/trajectory.hpp"
#include "xmix/nn/mlp.hpp"

namespace xmix {

struct ReturnsAndAdvantages {
  Source source = Source::kAgent;
  std::vector<double> returns;
  std::vector<double> values;          // V(o_t) used for the advantages
  std::vector<double> advantages;      // raw: returns - values
  std::vector<double> standardized;    // batch-standardized advantages
};

// R_t = sum_{k<T-t} gamma^k r_{t+k} + gamma^(T-t) * bootstrap.
std::vector<double> bootstrapped_returns(std::span<const double> rewards,
                                         double bootstrap, double gamma);

// Uses V(terminal_obs) as the bootstrap, or 0 when the trajectory ended by
// arriving at the destination.
std::vector<double> bootstrapped_returns(const Trajectory& traj,
                                         const MlpParams& value_net,
                                         double gamma);

std::vector<double> advantages(std::span<const double> returns,
                               std::span<const double> values);

// (a - mean) / (population std + eps).
std::vector<double> standardize(std::span<const double> values,
                                double eps = 1e-8);

ReturnsAndAdvantages returns_and_advantages(const Trajectory& traj,
                                            const MlpParams& value_net,
                                            double gamma);

// Mean squared error. Throws PreconditionError on empty or unequal input.
double value_loss(std::span<const double> values,
                  std::span<const double> returns);

// mean_t min(w_t A_t, clip(w_t, 1-eps, 1+eps) A_t), w_t = exp(logp_new -
// logp_old). An objective to maximize.
double clipped_surrogate(std::span<const double> logp_new,
                         std::span<const double> logp_old,
                         std::span<const double> adv, double epsilon);

// d clipped_surrogate / d logp_new, per step (already includes the 1/T).
std::vector<double> clipped_surrogate_grad(std::span<const double> logp_new,
                                           std::span<const double> logp_old,
                                           std::span<const double> adv,
                                           double epsilon);

// exp(-(k/K) * dtw), k 1-based. Throws PreconditionError on k outside
// [1, K] or negative dtw.
double alpha_weight(int k, int total_epochs, double dtw);

double mixed_policy_objective(double agent_objective, double expert_objective,
                              double alpha);

double total_policy_objective(double mixed, double mean_entropy, double beta);

// d log pi(action) / d logits for a masked softmax.
std::vector<double> log_prob_logit_grad(const PolicyOutput& out, int action);
// d H / d logits for a masked softmax.
std::vector<double> entropy_logit_grad(const PolicyOutput& out);

}  // namespace xmix

#endif  // XMIX_PPO_LOSSES_HPP_
