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

#ifndef XMIX_ENV_FIXTURES_HPP_
#define XMIX_ENV_FIXTURES_HPP_

#include <cstdint>
#include <vector>

#include "xmix/env/road_env.hpp"
#include "xmix/env/road_graph.hpp"

namespace xmix {

// N x N grid, ids row-major (id = row * n + col), bidirectional 4-neighbour
// edges of length `spacing`.
RoadGraph make_grid(int n, double spacing = 1.0);

// Block length of the shipped grid fixture (data/grid5.json, builtin:grid:N).
// Short blocks keep the per-step time penalty comparable to the shaping
// term, so a random walk that eventually arrives scores far below an
// efficient route.
inline constexpr double kGridFixtureSpacing = 0.1;

// Chain 0 -> 1 -> ... with the given edge lengths, unit spacing on the x axis.
RoadGraph make_line(const std::vector<double>& lengths);

// Small irregular network: a jittered 4x4 lattice with elevation-scaled edge
// lengths, one-way streets and two diagonal connectors. Strongly connected.
RoadGraph make_hilly();

struct ScenarioOptions {
  int count = 10;
  int min_hops = 1;        // lower bound on the unweighted start->dest hop count
  int depart_spread = 0;   // depart_time drawn uniformly from [0, depart_spread]
};

// Deterministic start/destination pairs. Agent i's pair depends only on
// (seed, i), never on the total count.
std::vector<AgentSpec> generate_agents(const RoadGraph& graph,
                                       const ScenarioOptions& options,
                                       std::uint64_t seed);

}  // namespace xmix

#endif  // XMIX_ENV_FIXTURES_HPP_
