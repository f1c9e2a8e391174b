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

#ifndef XMIX_TRAIN_TRAINER_HPP_
#define XMIX_TRAIN_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xmix/demo/prompt.hpp"
#include "xmix/demo/provider.hpp"
#include "xmix/dtw/trajectory.hpp"
#include "xmix/env/road_env.hpp"
#include "xmix/nn/adam.hpp"
#include "xmix/nn/mlp.hpp"
#include "xmix/train/config.hpp"

namespace xmix {

// One agent's private learning state: the policy and both critics with
// their optimizers. Learners share nothing with each other.
struct AgentLearner {
  MlpParams policy;
  MlpParams value_agent;
  MlpParams value_expert;
  AdamState policy_opt;
  AdamState value_agent_opt;
  AdamState value_expert_opt;
  std::optional<Trajectory> last_agent;
  // Shared by reference between regenerations.
  std::shared_ptr<const Trajectory> last_expert;
  double alpha = 1.0;
  double dtw = 0.0;
  bool alpha_stale = true;  // recompute alpha at the next update
};

AgentLearner make_learner(std::size_t obs_dim, std::size_t actions,
                          std::size_t hidden, std::uint64_t master_seed,
                          int agent_id);

struct UpdateStats {
  double policy_objective = 0.0;  // maximized
  double value_loss_agent = 0.0;
  double value_loss_expert = 0.0;
  double alpha = 1.0;
  double dtw = 0.0;
  double mean_entropy = 0.0;
  bool used_expert = false;
};

// Per-agent update from that agent's own data only: returns/advantages for
// both sources, critic steps on the squared error, alpha (dynamic, fixed or
// 1), then `update_epochs` policy steps on the negated total objective.
// Throws NumericError on a non-finite loss.
UpdateStats update_agent(AgentLearner& learner, const Trajectory& tau_a,
                         const Trajectory* tau_e, int k, int total_epochs,
                         const TrainConfig& config, const RoadGraph& graph);

// One decentralized episode: each agent samples from its own masked policy
// given only its own observation.
std::vector<Trajectory> rollout(std::span<const AgentLearner> learners,
                                RoadEnv& env, std::span<Rng> agent_rngs,
                                std::uint64_t seed);

// Greedy (argmax, lowest index on ties) episode; returns per-agent reward.
std::vector<double> greedy_episode(std::span<const MlpParams> policies,
                                   RoadEnv& env, std::uint64_t seed);

struct EpochMetrics {
  int epoch = 0;
  double mean_reward_a = 0.0;
  double mean_reward_e = 0.0;  // NaN without expert trajectories
  double alpha_mean = 1.0;
  double dtw_mean = 0.0;       // NaN without expert trajectories
  double validity_rate = 0.0;  // NaN without a provider
  double loss_policy = 0.0;
  double loss_value_a = 0.0;
  double loss_value_e = 0.0;
  double seconds = 0.0;  // 0 unless config.wall_clock
  double elapsed = 0.0;  // always measured, never written to metrics.csv
  bool regenerated = false;
  std::int64_t tokens = 0;
  std::vector<double> reward_a;
  std::vector<double> reward_e;
  std::vector<double> alpha;
  std::vector<double> dtw;
};

// Column order of metrics.csv.
std::string metrics_csv_header();
std::string metrics_csv_row(const EpochMetrics& m);

struct Scenario {
  RoadGraph graph;
  std::vector<AgentSpec> specs;
};

// Loads or builds the graph named by config.graph ("builtin:grid:N",
// "builtin:hilly", "builtin:line", or a JSON file path, relative paths tried
// against `base_dir` too) and the agent specs.
Scenario make_scenario(const TrainConfig& config,
                       const std::filesystem::path& base_dir = {});

std::unique_ptr<ExpertProvider> make_provider(const TrainConfig& config);

// Algorithm driver. Owns the learners, environment, provider and prompt.
class Trainer {
 public:
  Trainer(TrainConfig config, Scenario scenario,
          std::unique_ptr<ExpertProvider> provider = nullptr);

  // Runs epoch k (1-based) and returns its metrics.
  EpochMetrics run_epoch(int k);
  // All epochs; `on_epoch` sees every record as soon as it exists.
  void run(const std::function<void(const EpochMetrics&)>& on_epoch = {});

  void save_checkpoint(const std::filesystem::path& dir, int epoch) const;

  const std::vector<AgentLearner>& learners() const { return learners_; }
  std::vector<AgentLearner>& learners() { return learners_; }
  const Scenario& scenario() const { return scenario_; }
  const TrainConfig& config() const { return config_; }
  const PromptState& prompt() const { return prompt_; }
  std::size_t regenerations() const { return regenerations_; }
  std::vector<MlpParams> policies() const;
  const EnvConfig& env_config() const { return config_.env; }

  // Demonstration quality of one freshly sampled instruction set against
  // one current-policy rollout. Does not touch learner state.
  struct DemoQuality {
    std::int64_t tokens = 0;
    std::vector<std::uint8_t> valid;
    std::vector<double> reward;
    std::vector<double> dtw;
  };
  DemoQuality assess_demos(ExpertProvider& provider, std::uint64_t seed);

 private:
  bool regeneration_epoch(int k) const;

  TrainConfig config_;
  Scenario scenario_;
  std::unique_ptr<ExpertProvider> provider_;
  RoadEnv env_;
  std::vector<AgentLearner> learners_;
  std::vector<Rng> agent_rngs_;
  PromptState prompt_;
  double validity_rate_;
  std::size_t regenerations_ = 0;
};

// Checkpoint directory: manifest.json plus agent_NNN_{policy,value_a,value_e}.json.
struct LoadedCheckpoint {
  std::uint64_t config_hash = 0;
  int epoch = 0;
  std::vector<MlpParams> policies;
};
LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir);

struct EvalStats {
  std::vector<double> episode_rewards;  // mean over agents, per episode
  double mean = 0.0;
  double stddev = 0.0;
};

// Greedy evaluation of the given policies on `episodes` episodes.
EvalStats evaluate_policies(std::span<const MlpParams> policies,
                            const Scenario& scenario, const EnvConfig& env,
                            int episodes, std::uint64_t seed);

// Mean per-agent return of executing the oracle routes.
double oracle_return(const Scenario& scenario, const EnvConfig& env);

}  // namespace xmix

#endif  // XMIX_TRAIN_TRAINER_HPP_
