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

#include "xmix/env/fixtures.hpp"

#include <cmath>
#include <queue>

#include "xmix/error.hpp"
#include "xmix/rng.hpp"

namespace xmix {
namespace {

int hop_count(const RoadGraph& graph, JunctionId from, JunctionId to) {
  std::vector<int> hops(graph.node_count(), -1);
  std::queue<JunctionId> frontier;
  hops[from] = 0;
  frontier.push(from);
  while (!frontier.empty()) {
    const JunctionId u = frontier.front();
    frontier.pop();
    if (u == to) return hops[u];
    for (const Edge& e : graph.out_edges(u)) {
      if (hops[e.to] < 0) {
        hops[e.to] = hops[u] + 1;
        frontier.push(e.to);
      }
    }
  }
  return -1;
}

}  // namespace

RoadGraph make_grid(int n, double spacing) {
  if (n < 1) throw PreconditionError("make_grid: n must be positive");
  std::vector<Point> nodes;
  std::vector<Edge> edges;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) nodes.push_back({c * spacing, r * spacing});
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int id = r * n + c;
      if (c + 1 < n) {
        edges.push_back({id, id + 1, spacing});
        edges.push_back({id + 1, id, spacing});
      }
      if (r + 1 < n) {
        edges.push_back({id, id + n, spacing});
        edges.push_back({id + n, id, spacing});
      }
    }
  }
  return RoadGraph(std::move(nodes), std::move(edges));
}

RoadGraph make_line(const std::vector<double>& lengths) {
  std::vector<Point> nodes;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i <= lengths.size(); ++i) {
    nodes.push_back({static_cast<double>(i), 0.0});
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), lengths[i]});
  }
  return RoadGraph(std::move(nodes), std::move(edges));
}

RoadGraph make_hilly() {
  constexpr int kSide = 4;
  constexpr double kSpacing = 1.0;
  std::vector<Point> nodes;
  std::vector<double> elevation;
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) {
      const double jx = 0.18 * std::sin(1.7 * r + 0.9 * c);
      const double jy = 0.18 * std::cos(1.3 * c - 0.7 * r);
      nodes.push_back({c * kSpacing + jx, r * kSpacing + jy});
      elevation.push_back(0.6 * std::sin(0.8 * c) * std::cos(0.6 * r) + 0.25 * r);
    }
  }
  auto length = [&](int a, int b) {
    const double dx = nodes[a].x - nodes[b].x;
    const double dy = nodes[a].y - nodes[b].y;
    const double climb = elevation[b] - elevation[a];
    // Uphill costs more than downhill.
    const double factor = 1.0 + (climb > 0.0 ? 1.2 * climb : 0.3 * -climb);
    return std::round(1000.0 * std::hypot(dx, dy) * factor) / 1000.0;
  };
  std::vector<Edge> edges;
  auto link = [&](int a, int b, bool both) {
    edges.push_back({a, b, length(a, b)});
    if (both) edges.push_back({b, a, length(b, a)});
  };
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) {
      const int id = r * kSide + c;
      if (c + 1 < kSide) {
        if (r == 1) {
          link(id, id + 1, false);  // one-way eastbound
        } else if (r == 2) {
          link(id + 1, id, false);  // one-way westbound
        } else {
          link(id, id + 1, true);
        }
      }
      if (r + 1 < kSide) {
        // A missing segment on a steep slope.
        if (!(c == 2 && r == 0)) link(id, id + kSide, true);
      }
    }
  }
  link(0, 5, true);    // diagonal connector
  link(10, 15, false); // one-way diagonal downhill
  return RoadGraph(std::move(nodes), std::move(edges));
}

std::vector<AgentSpec> generate_agents(const RoadGraph& graph,
                                       const ScenarioOptions& options,
                                       std::uint64_t seed) {
  if (options.count < 0) throw PreconditionError("agent count must be >= 0");
  const auto n = graph.node_count();
  if (n < 2) throw PreconditionError("graph needs at least two junctions");
  std::vector<AgentSpec> specs;
  for (int i = 0; i < options.count; ++i) {
    Rng rng(derive_seed(seed, "scenario", static_cast<std::uint64_t>(i)));
    AgentSpec spec;
    spec.agent_id = i;
    bool found = false;
    for (int attempt = 0; attempt < 10000 && !found; ++attempt) {
      spec.start = static_cast<JunctionId>(rng.below(n));
      spec.dest = static_cast<JunctionId>(rng.below(n));
      if (spec.start == spec.dest) continue;
      const int hops = hop_count(graph, spec.start, spec.dest);
      found = hops >= std::max(1, options.min_hops);
    }
    if (!found) {
      throw PreconditionError("cannot place agent " + std::to_string(i) +
                              " with min_hops " +
                              std::to_string(options.min_hops));
    }
    spec.depart_time =
        options.depart_spread > 0
            ? static_cast<int>(rng.below(options.depart_spread + 1))
            : 0;
    specs.push_back(spec);
  }
  return specs;
}

}  // namespace xmix
