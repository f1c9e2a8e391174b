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

#include "xmix/env/road_env.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "xmix/error.hpp"

namespace xmix {
namespace {

double normalized_id(const RoadGraph& graph, JunctionId j) {
  const std::size_t n = graph.node_count();
  return n > 1 ? static_cast<double>(j) / static_cast<double>(n - 1) : 0.0;
}

// Potential used for shaping: remaining shortest distance. Junctions that
// cannot reach the destination get a finite cap of twice the diameter.
double potential(const RoadGraph& graph, JunctionId at, JunctionId dest) {
  const double d = graph.distance(at, dest);
  return std::isfinite(d) ? d : 2.0 * graph.diameter();
}

}  // namespace

std::size_t Observation::valid_actions() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

void validate_specs(const RoadGraph& graph, std::span<const AgentSpec> specs) {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const AgentSpec& s = specs[i];
    std::ostringstream where;
    where << "agent " << i;
    if (s.agent_id != static_cast<int>(i)) {
      throw PreconditionError(where.str() + ": agent_id must equal its index");
    }
    if (!graph.contains(s.start) || !graph.contains(s.dest)) {
      throw PreconditionError(where.str() + ": start/dest not in graph");
    }
    if (s.start == s.dest) {
      throw PreconditionError(where.str() + ": start equals destination");
    }
    if (!graph.reachable(s.start, s.dest)) {
      throw PreconditionError(where.str() + ": destination unreachable");
    }
    if (s.depart_time < 0) {
      throw PreconditionError(where.str() + ": negative depart_time");
    }
  }
}

bool spawned(const EnvState& state, const AgentSpec& spec) {
  return state.step >= spec.depart_time;
}

Observation observe(const EnvState& state, const RoadGraph& graph,
                    const AgentSpec& spec) {
  const std::size_t m = graph.max_out_degree();
  Observation obs;
  obs.features.assign(2 + 2 * m, 0.0);
  obs.mask.assign(m, 0);
  const JunctionId at = state.position[spec.agent_id];
  obs.features[0] = normalized_id(graph, at);
  obs.features[1] = normalized_id(graph, spec.dest);
  const bool live = spawned(state, spec);
  const auto out = graph.out_edges(at);
  for (std::size_t i = 0; i < m; ++i) {
    if (live && i < out.size()) {
      obs.features[2 + 2 * i] = edge_score(graph, out[i], spec.dest);
      obs.features[3 + 2 * i] = normalized_id(graph, out[i].to);
      obs.mask[i] = 1;
    } else {
      obs.features[2 + 2 * i] = 0.0;
      obs.features[3 + 2 * i] = -1.0;
    }
  }
  return obs;
}

std::pair<EnvState, std::vector<Observation>> reset(
    const RoadGraph& graph, std::span<const AgentSpec> specs,
    std::uint64_t seed) {
  validate_specs(graph, specs);
  EnvState state;
  state.seed = seed;
  state.step = 0;
  for (const AgentSpec& s : specs) state.position.push_back(s.start);
  state.done.assign(specs.size(), 0);
  state.arrived.assign(specs.size(), 0);
  state.cumulative_reward.assign(specs.size(), 0.0);
  std::vector<Observation> obs;
  obs.reserve(specs.size());
  for (const AgentSpec& s : specs) obs.push_back(observe(state, graph, s));
  return {std::move(state), std::move(obs)};
}

bool episode_done(const EnvState& state, const EnvConfig& config) {
  if (state.step >= config.step_limit) return true;
  return std::all_of(state.done.begin(), state.done.end(),
                     [](std::uint8_t d) { return d != 0; });
}

StepResult step(EnvState& state, const RoadGraph& graph,
                std::span<const AgentSpec> specs, const EnvConfig& config,
                std::span<const int> joint_action) {
  const std::size_t n = specs.size();
  if (joint_action.size() != n) {
    throw PreconditionError("step: joint action size " +
                            std::to_string(joint_action.size()) +
                            " != agent count " + std::to_string(n));
  }
  if (episode_done(state, config)) {
    throw PreconditionError("step: episode is already over");
  }

  std::vector<std::uint8_t> acting(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (state.done[i] || !spawned(state, specs[i])) continue;
    const int a = joint_action[i];
    const auto degree = graph.out_degree(state.position[i]);
    if (a < 0 || static_cast<std::size_t>(a) >= degree) {
      std::ostringstream msg;
      msg << "step: agent " << i << " chose masked action " << a
          << " at junction " << state.position[i] << " (out-degree " << degree
          << ")";
      throw PreconditionError(msg.str());
    }
    acting[i] = 1;
  }

  std::map<std::pair<JunctionId, JunctionId>, int> load;
  if (config.congestion) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!acting[i]) continue;
      const Edge& e = graph.out_edges(state.position[i])[joint_action[i]];
      ++load[{e.from, e.to}];
    }
  }

  StepResult result;
  result.rewards.assign(n, 0.0);
  result.acted = acting;
  for (std::size_t i = 0; i < n; ++i) {
    if (!acting[i]) continue;
    const AgentSpec& spec = specs[i];
    const Edge& e = graph.out_edges(state.position[i])[joint_action[i]];
    const double before = potential(graph, e.from, spec.dest);
    const double after = potential(graph, e.to, spec.dest);
    double r = -config.time_penalty + config.shaping * (before - after);
    if (config.congestion) {
      r -= config.congestion_penalty * (load[{e.from, e.to}] - 1);
    }
    state.position[i] = e.to;
    if (e.to == spec.dest) {
      r += config.arrival_bonus;
      state.arrived[i] = 1;
      state.done[i] = 1;
    } else if (graph.out_degree(e.to) == 0) {
      state.done[i] = 1;  // stranded
    }
    state.cumulative_reward[i] += r;
    result.rewards[i] = r;
  }
  ++state.step;

  result.observations.reserve(n);
  for (const AgentSpec& s : specs) {
    result.observations.push_back(observe(state, graph, s));
  }
  result.done = state.done;
  result.episode_done = episode_done(state, config);
  return result;
}

RoadEnv::RoadEnv(const RoadGraph& graph, std::vector<AgentSpec> specs,
                 EnvConfig config)
    : graph_(&graph), specs_(std::move(specs)), config_(config) {
  validate_specs(graph, specs_);
}

std::vector<Observation> RoadEnv::reset(std::uint64_t seed) {
  auto [state, obs] = xmix::reset(*graph_, specs_, seed);
  state_ = std::move(state);
  return obs;
}

StepResult RoadEnv::step(std::span<const int> joint_action) {
  return xmix::step(state_, *graph_, specs_, config_, joint_action);
}

void RoadEnv::retire(int agent) { state_.done.at(agent) = 1; }

Observation RoadEnv::observe(int agent) const {
  return xmix::observe(state_, *graph_, specs_.at(agent));
}

bool RoadEnv::spawned(int agent) const {
  return xmix::spawned(state_, specs_.at(agent));
}

}  // namespace xmix
