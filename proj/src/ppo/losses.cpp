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

#include "xmix/ppo/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "xmix/error.hpp"

namespace xmix {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw PreconditionError(std::string(what) + ": length mismatch (" +
                            std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

std::vector<double> bootstrapped_returns(std::span<const double> rewards,
                                         double bootstrap, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw PreconditionError("bootstrapped_returns: gamma outside [0, 1]");
  }
  std::vector<double> returns(rewards.size());
  double running = bootstrap;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    running = rewards[t] + gamma * running;
    returns[t] = running;
  }
  return returns;
}

std::vector<double> bootstrapped_returns(const Trajectory& traj,
                                         const MlpParams& value_net,
                                         double gamma) {
  const double tail =
      traj.arrived ? 0.0 : value_forward(value_net, traj.terminal_obs);
  std::vector<double> rewards;
  rewards.reserve(traj.size());
  for (const Transition& t : traj.transitions) rewards.push_back(t.reward);
  return bootstrapped_returns(rewards, tail, gamma);
}

std::vector<double> advantages(std::span<const double> returns,
                               std::span<const double> values) {
  require_same_length(returns.size(), values.size(), "advantages");
  std::vector<double> out(returns.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = returns[i] - values[i];
  return out;
}

std::vector<double> standardize(std::span<const double> values, double eps) {
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  const double n = static_cast<double>(out.size());
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / n;
  double var = 0.0;
  for (double v : out) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  for (double& v : out) v = (v - mean) / (sd + eps);
  return out;
}

ReturnsAndAdvantages returns_and_advantages(const Trajectory& traj,
                                            const MlpParams& value_net,
                                            double gamma) {
  ReturnsAndAdvantages ra;
  ra.source = traj.source;
  ra.returns = bootstrapped_returns(traj, value_net, gamma);
  ra.values.reserve(traj.size());
  ForwardCache cache;
  for (const Transition& t : traj.transitions) {
    ra.values.push_back(value_forward(value_net, t.obs, cache));
  }
  ra.advantages = advantages(ra.returns, ra.values);
  ra.standardized = standardize(ra.advantages);
  return ra;
}

double value_loss(std::span<const double> values,
                  std::span<const double> returns) {
  require_same_length(values.size(), returns.size(), "value_loss");
  if (values.empty()) throw PreconditionError("value_loss: empty batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - returns[i];
    sum += d * d;
  }
  return sum / static_cast<double>(values.size());
}

double clipped_surrogate(std::span<const double> logp_new,
                         std::span<const double> logp_old,
                         std::span<const double> adv, double epsilon) {
  require_same_length(logp_new.size(), logp_old.size(), "clipped_surrogate");
  require_same_length(logp_new.size(), adv.size(), "clipped_surrogate");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw PreconditionError("clipped_surrogate: epsilon outside (0, 1)");
  }
  if (adv.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t t = 0; t < adv.size(); ++t) {
    const double ratio = std::exp(logp_new[t] - logp_old[t]);
    if (!std::isfinite(ratio)) {
      throw NumericError("clipped_surrogate: non-finite ratio at step " +
                         std::to_string(t));
    }
    const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
    sum += std::min(ratio * adv[t], clipped * adv[t]);
  }
  return sum / static_cast<double>(adv.size());
}

std::vector<double> clipped_surrogate_grad(std::span<const double> logp_new,
                                           std::span<const double> logp_old,
                                           std::span<const double> adv,
                                           double epsilon) {
  require_same_length(logp_new.size(), logp_old.size(), "clipped_surrogate_grad");
  require_same_length(logp_new.size(), adv.size(), "clipped_surrogate_grad");
  std::vector<double> grad(adv.size(), 0.0);
  if (adv.empty()) return grad;
  const double inv_n = 1.0 / static_cast<double>(adv.size());
  for (std::size_t t = 0; t < adv.size(); ++t) {
    const double ratio = std::exp(logp_new[t] - logp_old[t]);
    // The unclipped branch is the minimum (and carries gradient) unless the
    // ratio has left the trust region in the direction the advantage favors.
    const bool clipped = (adv[t] > 0.0 && ratio > 1.0 + epsilon) ||
                         (adv[t] < 0.0 && ratio < 1.0 - epsilon);
    if (!clipped) grad[t] = ratio * adv[t] * inv_n;
  }
  return grad;
}

double alpha_weight(int k, int total_epochs, double dtw) {
  if (total_epochs < 1 || k < 1 || k > total_epochs) {
    throw PreconditionError("alpha_weight: need 1 <= k <= K");
  }
  if (!(dtw >= 0.0)) throw PreconditionError("alpha_weight: negative DTW distance");
  // Kept strictly positive where exp() would underflow.
  return std::max(std::exp(-(static_cast<double>(k) / total_epochs) * dtw),
                  std::numeric_limits<double>::denorm_min());
}

double mixed_policy_objective(double agent_objective, double expert_objective,
                              double alpha) {
  return alpha * agent_objective + (1.0 - alpha) * expert_objective;
}

double total_policy_objective(double mixed, double mean_entropy, double beta) {
  return mixed + beta * mean_entropy;
}

std::vector<double> log_prob_logit_grad(const PolicyOutput& out, int action) {
  std::vector<double> g(out.probs.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = -out.probs[j];
  g.at(action) += 1.0;
  return g;
}

std::vector<double> entropy_logit_grad(const PolicyOutput& out) {
  std::vector<double> g(out.probs.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (out.probs[j] > 0.0) g[j] = -out.probs[j] * (out.log_probs[j] + out.entropy);
  }
  return g;
}

}  // namespace xmix
