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

#ifndef XMIX_DEMO_EXPERTS_HPP_
#define XMIX_DEMO_EXPERTS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xmix/demo/instructions.hpp"
#include "xmix/dtw/trajectory.hpp"
#include "xmix/env/road_env.hpp"
#include "xmix/nn/mlp.hpp"
#include "xmix/rng.hpp"

namespace xmix {

// Shortest route per agent. Throws PreconditionError if a destination is
// unreachable.
ExecutableSet oracle_expert(const RoadGraph& graph,
                            std::span<const AgentSpec> specs);

inline constexpr std::size_t kLogitCandidates = 8;

// Per agent: up to kLogitCandidates loopless routes, one sampled with
// probability proportional to exp(-length / temperature).
ExecutableSet logit_expert(const RoadGraph& graph,
                           std::span<const AgentSpec> specs,
                           double temperature, Rng& rng);

// Index into `costs` drawn with probability proportional to
// exp(-cost / temperature).
std::size_t sample_logit(std::span<const double> costs, double temperature,
                         Rng& rng);

enum class InvalidRoutePolicy {
  kOracleSubstitute,  // run the shortest route instead (flagged)
  kSkipAgent,         // no expert trajectory for that agent
  kPrefix,            // run the longest executable prefix, then stop
};

struct DemoExecution {
  std::vector<std::optional<Trajectory>> trajectories;
  std::vector<std::uint8_t> valid;        // the route validated as given
  std::vector<std::uint8_t> substituted;  // oracle route ran instead
};

// Runs every agent's compiled route jointly from s_0. `policies` (one per
// agent, or empty) provide the log-probabilities recorded on each taken
// action.
DemoExecution execute_demos(const RoadGraph& graph,
                            std::span<const AgentSpec> specs,
                            const EnvConfig& env_config,
                            const ExecutableSet& set,
                            std::span<const MlpParams> policies,
                            InvalidRoutePolicy on_invalid, std::uint64_t seed);

}  // namespace xmix

#endif  // XMIX_DEMO_EXPERTS_HPP_
