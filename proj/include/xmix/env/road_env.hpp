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

#ifndef XMIX_ENV_ROAD_ENV_HPP_
#define XMIX_ENV_ROAD_ENV_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "xmix/env/road_graph.hpp"

namespace xmix {

struct AgentSpec {
  int agent_id = 0;
  JunctionId start = 0;
  JunctionId dest = 0;
  int depart_time = 0;
};

struct EnvConfig {
  int step_limit = 200;
  double time_penalty = 0.1;   // c_time, charged per step while moving
  double shaping = 1.0;        // kappa
  double arrival_bonus = 10.0;  // B
  // Off by default: agents then do not interact at all.
  bool congestion = false;
  double congestion_penalty = 0.1;  // per other agent sharing the same edge
};

// Fixed-length feature vector of size 2 + 2m plus the m-slot action mask.
//   [0]        current junction id / (N-1)
//   [1]        destination junction id / (N-1)
//   [2+2i]     score of the i-th outgoing edge (0 when padded)
//   [2+2i+1]   end junction id of the i-th edge / (N-1) (-1 when padded)
struct Observation {
  std::vector<double> features;
  std::vector<std::uint8_t> mask;

  std::size_t valid_actions() const;
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct EnvState {
  int step = 0;
  std::vector<JunctionId> position;
  std::vector<std::uint8_t> done;
  std::vector<std::uint8_t> arrived;
  std::vector<double> cumulative_reward;
  std::uint64_t seed = 0;
};

struct StepResult {
  std::vector<Observation> observations;
  std::vector<double> rewards;
  std::vector<std::uint8_t> done;
  // The agent took a transition this step (spawned and not already done).
  std::vector<std::uint8_t> acted;
  bool episode_done = false;
};

inline constexpr int kNoAction = -1;

// Throws PreconditionError when specs are inconsistent with the graph.
void validate_specs(const RoadGraph& graph, std::span<const AgentSpec> specs);

bool spawned(const EnvState& state, const AgentSpec& spec);

Observation observe(const EnvState& state, const RoadGraph& graph,
                    const AgentSpec& spec);

std::pair<EnvState, std::vector<Observation>> reset(
    const RoadGraph& graph, std::span<const AgentSpec> specs,
    std::uint64_t seed);

// Advances every spawned, not-done agent along its chosen edge. Entries for
// other agents are ignored (pass kNoAction).
StepResult step(EnvState& state, const RoadGraph& graph,
                std::span<const AgentSpec> specs, const EnvConfig& config,
                std::span<const int> joint_action);

bool episode_done(const EnvState& state, const EnvConfig& config);

// Convenience owner of a graph reference, specs, config and state.
class RoadEnv {
 public:
  RoadEnv(const RoadGraph& graph, std::vector<AgentSpec> specs,
          EnvConfig config);

  std::vector<Observation> reset(std::uint64_t seed);
  StepResult step(std::span<const int> joint_action);
  // Marks an agent done without arrival. Used when an instruction sequence
  // runs out before the destination.
  void retire(int agent);
  Observation observe(int agent) const;
  bool spawned(int agent) const;
  bool done() const { return xmix::episode_done(state_, config_); }

  const EnvState& state() const { return state_; }
  const RoadGraph& graph() const { return *graph_; }
  const std::vector<AgentSpec>& specs() const { return specs_; }
  const EnvConfig& config() const { return config_; }
  std::size_t agent_count() const { return specs_.size(); }

 private:
  const RoadGraph* graph_;
  std::vector<AgentSpec> specs_;
  EnvConfig config_;
  EnvState state_;
};

}  // namespace xmix

#endif  // XMIX_ENV_ROAD_ENV_HPP_
