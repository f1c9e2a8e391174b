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

#include "xmix/demo/experts.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "xmix/error.hpp"

namespace xmix {
namespace {

std::vector<JunctionId> executable_prefix(const RoadGraph& graph,
                                          const AgentSpec& spec,
                                          const std::vector<JunctionId>& route) {
  std::vector<JunctionId> prefix{spec.start};
  if (route.empty() || route.front() != spec.start) return prefix;
  for (std::size_t i = 1; i < route.size(); ++i) {
    if (!graph.edge_index(prefix.back(), route[i])) break;
    prefix.push_back(route[i]);
    if (route[i] == spec.dest) break;
  }
  return prefix;
}

std::vector<int> hops_to_actions(const RoadGraph& graph,
                                 const std::vector<JunctionId>& path) {
  std::vector<int> actions;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    actions.push_back(static_cast<int>(*graph.edge_index(path[i], path[i + 1])));
  }
  return actions;
}

}  // namespace

ExecutableSet oracle_expert(const RoadGraph& graph,
                            std::span<const AgentSpec> specs) {
  std::vector<std::vector<JunctionId>> routes;
  for (const AgentSpec& s : specs) {
    auto path = shortest_path(graph, s.start, s.dest);
    if (!path) {
      throw PreconditionError("oracle_expert: destination of agent " +
                              std::to_string(s.agent_id) + " is unreachable");
    }
    routes.push_back(std::move(path->junctions));
  }
  return routes_to_set(routes);
}

std::size_t sample_logit(std::span<const double> costs, double temperature,
                         Rng& rng) {
  if (!(temperature > 0.0)) throw PreconditionError("logit: temperature must be > 0");
  if (costs.empty()) throw PreconditionError("logit: no candidate routes");
  const double best = *std::min_element(costs.begin(), costs.end());
  std::vector<double> weights;
  double total = 0.0;
  for (double c : costs) {
    weights.push_back(std::exp(-(c - best) / temperature));
    total += weights.back();
  }
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

ExecutableSet logit_expert(const RoadGraph& graph,
                           std::span<const AgentSpec> specs,
                           double temperature, Rng& rng) {
  std::vector<std::vector<JunctionId>> routes;
  for (const AgentSpec& s : specs) {
    const auto candidates = k_shortest_paths(graph, s.start, s.dest, kLogitCandidates);
    if (candidates.empty()) {
      throw PreconditionError("logit_expert: no route for agent " +
                              std::to_string(s.agent_id));
    }
    std::vector<double> costs;
    for (const Path& p : candidates) costs.push_back(p.length);
    routes.push_back(candidates[sample_logit(costs, temperature, rng)].junctions);
  }
  return routes_to_set(routes);
}

DemoExecution execute_demos(const RoadGraph& graph,
                            std::span<const AgentSpec> specs,
                            const EnvConfig& env_config,
                            const ExecutableSet& set,
                            std::span<const MlpParams> policies,
                            InvalidRoutePolicy on_invalid, std::uint64_t seed) {
  const std::size_t n = specs.size();
  if (set.agent_count() != n) {
    throw PreconditionError("execute_demos: instruction set covers " +
                            std::to_string(set.agent_count()) + " agents, expected " +
                            std::to_string(n));
  }
  if (!policies.empty() && policies.size() != n) {
    throw PreconditionError("execute_demos: need one policy per agent");
  }

  DemoExecution out;
  out.trajectories.resize(n);
  out.valid.assign(n, 0);
  out.substituted.assign(n, 0);
  std::vector<std::deque<int>> plan(n);
  std::vector<std::uint8_t> skip(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto route = set.per_agent[i].waypoints();
    if (validate_route(graph, specs[i], route)) {
      out.valid[i] = 1;
      const auto actions = compile_to_actions(graph, specs[i], route);
      plan[i].assign(actions.begin(), actions.end());
      continue;
    }
    switch (on_invalid) {
      case InvalidRoutePolicy::kOracleSubstitute: {
        const auto path = shortest_path(graph, specs[i].start, specs[i].dest);
        if (!path) throw PreconditionError("execute_demos: unreachable destination");
        const auto actions = hops_to_actions(graph, path->junctions);
        plan[i].assign(actions.begin(), actions.end());
        out.substituted[i] = 1;
        break;
      }
      case InvalidRoutePolicy::kSkipAgent:
        skip[i] = 1;
        break;
      case InvalidRoutePolicy::kPrefix: {
        const auto actions =
            hops_to_actions(graph, executable_prefix(graph, specs[i], route));
        plan[i].assign(actions.begin(), actions.end());
        break;
      }
    }
  }

  RoadEnv env(graph, std::vector<AgentSpec>(specs.begin(), specs.end()), env_config);
  std::vector<Observation> obs = env.reset(seed);
  std::vector<Trajectory> trajs(n);
  for (std::size_t i = 0; i < n; ++i) {
    trajs[i].source = Source::kExpert;
    trajs[i].agent_id = static_cast<int>(i);
    trajs[i].junction_path.push_back(specs[i].start);
    if (skip[i]) env.retire(static_cast<int>(i));
  }

  std::vector<int> joint(n, kNoAction);
  ForwardCache cache;
  while (!env.done()) {
    for (std::size_t i = 0; i < n; ++i) {
      joint[i] = kNoAction;
      if (env.state().done[i] || !env.spawned(static_cast<int>(i))) continue;
      if (plan[i].empty()) {
        env.retire(static_cast<int>(i));
        continue;
      }
      joint[i] = plan[i].front();
      plan[i].pop_front();
    }
    if (env.done()) break;
    std::vector<Observation> before = obs;
    StepResult res = env.step(joint);
    for (std::size_t i = 0; i < n; ++i) {
      if (!res.acted[i]) continue;
      Transition t;
      t.action = joint[i];
      t.reward = res.rewards[i];
      if (!policies.empty()) {
        t.log_prob_behavior =
            policy_forward(policies[i], before[i], cache).log_probs[t.action];
      }
      t.obs = std::move(before[i]);
      trajs[i].transitions.push_back(std::move(t));
      trajs[i].junction_path.push_back(env.state().position[i]);
    }
    obs = std::move(res.observations);
  }
  for (std::size_t i = 0; i < n; ++i) {
    trajs[i].terminal_obs = obs[i];
    trajs[i].arrived = env.state().arrived[i] != 0;
    if (!skip[i]) out.trajectories[i] = std::move(trajs[i]);
  }
  return out;
}

}  // namespace xmix
