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
#include <functional>
#include <limits>
#include <queue>

#include "xmix/env/fixtures.hpp"
#include "xmix/env/road_graph.hpp"
#include "xmix/error.hpp"

namespace xmix {
namespace {

TEST(LoadGraph, MinimalTwoNodeGraph) {
  const RoadGraph g = load_graph(R"({"nodes":[{"id":0,"x":0,"y":0},{"id":1,"x":5,"y":0}],
                                    "edges":[{"from":0,"to":1,"length":5}]})");
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.max_out_degree(), 1u);
  EXPECT_DOUBLE_EQ(g.distance(0, 1), 5.0);
  EXPECT_FALSE(g.reachable(1, 0));
}

TEST(LoadGraph, DanglingEndpointNamesTheNode) {
  try {
    load_graph(R"({"nodes":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],
                  "edges":[{"from":0,"to":"Z","length":1}]})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("Z"), std::string::npos) << e.what();
  }
  try {
    load_graph(R"({"nodes":[{"id":0,"x":0,"y":0}],"edges":[{"from":0,"to":7,"length":1}]})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find('7'), std::string::npos) << e.what();
  }
}

TEST(LoadGraph, RejectsNonPositiveLengthAndBadJson) {
  EXPECT_THROW(load_graph(R"({"nodes":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],
                              "edges":[{"from":0,"to":1,"length":0}]})"),
               FormatError);
  EXPECT_THROW(load_graph("not json"), FormatError);
  EXPECT_THROW(load_graph(R"({"nodes":[{"id":1,"x":0,"y":0}],"edges":[]})"), FormatError);
}

TEST(LoadGraph, ShippedGridFixture) {
  const RoadGraph g = load_graph_file(std::string(XMIX_REPO_DATA) + "/grid5.json");
  EXPECT_EQ(g.node_count(), 25u);
  EXPECT_EQ(g.edge_count(), 80u);
  EXPECT_EQ(g.max_out_degree(), 4u);
}

TEST(LoadGraph, JsonRoundTrip) {
  const RoadGraph g = make_hilly();
  const RoadGraph back = load_graph(graph_to_json(g));
  ASSERT_EQ(back.edge_count(), g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    EXPECT_EQ(back.edges()[i].from, g.edges()[i].from);
    EXPECT_EQ(back.edges()[i].to, g.edges()[i].to);
    EXPECT_DOUBLE_EQ(back.edges()[i].length, g.edges()[i].length);
  }
}

TEST(RoadGraph, OutEdgesAscendByDestination) {
  const RoadGraph g = make_hilly();
  for (std::size_t j = 0; j < g.node_count(); ++j) {
    const auto out = g.out_edges(static_cast<JunctionId>(j));
    for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LT(out[i - 1].to, out[i].to);
    EXPECT_LE(out.size(), g.max_out_degree());
  }
}

TEST(RoadGraph, HillyFixtureIsStronglyConnected) {
  const RoadGraph g = make_hilly();
  for (std::size_t a = 0; a < g.node_count(); ++a) {
    for (std::size_t b = 0; b < g.node_count(); ++b) {
      EXPECT_TRUE(g.reachable(static_cast<JunctionId>(a), static_cast<JunctionId>(b)))
          << a << " -> " << b;
    }
  }
}

TEST(ShortestPath, LineGraph) {
  const RoadGraph g = make_line({1.0, 1.0});
  const auto p = shortest_path(g, 0, 2);
  ASSERT_TRUE(p.has_value());
  EXPECT_DOUBLE_EQ(p->length, 2.0);
  EXPECT_EQ(p->junctions, (std::vector<JunctionId>{0, 1, 2}));
  const auto self = shortest_path(g, 2, 2);
  ASSERT_TRUE(self.has_value());
  EXPECT_DOUBLE_EQ(self->length, 0.0);
  EXPECT_EQ(self->junctions, (std::vector<JunctionId>{2}));
  EXPECT_FALSE(shortest_path(g, 2, 0).has_value());
}

TEST(ShortestPath, LexicographicTieBreak) {
  // 0 -> 1 -> 3 and 0 -> 2 -> 3 have equal length.
  const RoadGraph g({{0, 0}, {1, 1}, {1, -1}, {2, 0}},
                    {{0, 2, 1.0}, {2, 3, 1.0}, {0, 1, 1.0}, {1, 3, 1.0}});
  const auto p = shortest_path(g, 0, 3);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->junctions, (std::vector<JunctionId>{0, 1, 3}));
}

// Exhaustive simple-path enumeration as an independent oracle.
double brute_force_shortest(const RoadGraph& g, JunctionId from, JunctionId to) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> seen(g.node_count(), 0);
  std::function<void(JunctionId, double)> dfs = [&](JunctionId u, double len) {
    if (len >= best) return;
    if (u == to) {
      best = len;
      return;
    }
    seen[u] = 1;
    for (const Edge& e : g.out_edges(u)) {
      if (!seen[e.to]) dfs(e.to, len + e.length);
    }
    seen[u] = 0;
  };
  dfs(from, 0.0);
  return best;
}

TEST(ShortestPath, GridCornerToCornerMatchesBruteForce) {
  const RoadGraph g = make_grid(5, 1.0);
  const auto p = shortest_path(g, 0, 24);
  ASSERT_TRUE(p.has_value());
  EXPECT_DOUBLE_EQ(p->length, 8.0);
  EXPECT_EQ(p->junctions.size(), 9u);
  EXPECT_DOUBLE_EQ(brute_force_shortest(g, 0, 24), 8.0);
}

TEST(ShortestPath, HillyDistancesMatchBruteForce) {
  const RoadGraph g = make_hilly();
  for (JunctionId a : {0, 3, 6, 12, 15}) {
    for (JunctionId b : {1, 7, 10, 14}) {
      if (a == b) continue;
      EXPECT_NEAR(g.distance(a, b), brute_force_shortest(g, a, b), 1e-9) << a << "->" << b;
      const auto p = shortest_path(g, a, b);
      ASSERT_TRUE(p.has_value());
      double len = 0.0;
      for (std::size_t i = 1; i < p->junctions.size(); ++i) {
        const auto idx = g.edge_index(p->junctions[i - 1], p->junctions[i]);
        ASSERT_TRUE(idx.has_value());
        len += g.out_edges(p->junctions[i - 1])[*idx].length;
      }
      EXPECT_NEAR(len, p->length, 1e-9);
    }
  }
}

TEST(KShortestPaths, LooplessSortedAndDistinct) {
  const RoadGraph g = make_grid(3, 1.0);
  const auto paths = k_shortest_paths(g, 0, 8, 8);
  ASSERT_EQ(paths.size(), 8u);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& j = paths[i].junctions;
    EXPECT_EQ(j.front(), 0);
    EXPECT_EQ(j.back(), 8);
    auto sorted = j;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end()) << "loop";
    if (i > 0) {
      EXPECT_LE(paths[i - 1].length, paths[i].length);
      EXPECT_NE(paths[i - 1].junctions, j);
    }
  }
  // The six monotone routes of length 4 come first.
  for (std::size_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(paths[i].length, 4.0);
  EXPECT_DOUBLE_EQ(paths[6].length, 6.0);
}

TEST(EdgeScore, LineGraphValues) {
  const RoadGraph g = make_line({1.0, 1.0});
  EXPECT_DOUBLE_EQ(g.diameter(), 2.0);
  EXPECT_DOUBLE_EQ(edge_score(g, g.out_edges(0)[0], 2), -1.0);
  EXPECT_DOUBLE_EQ(edge_score(g, g.out_edges(1)[0], 2), -0.5);
}

TEST(EdgeScore, UnreachableSentinel) {
  // 0 -> 1 -> 2 plus a dead end 0 -> 3.
  const RoadGraph g({{0, 0}, {1, 0}, {2, 0}, {0, 1}}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 3, 1.0}});
  const auto out = g.out_edges(0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].to, 3);
  EXPECT_DOUBLE_EQ(edge_score(g, out[1], 2), kUnreachableScore);
}

TEST(EdgeScore, MonotoneInRemainingDistance) {
  for (const RoadGraph& g : {make_grid(5, 1.0), make_hilly()}) {
    for (std::size_t j = 0; j < g.node_count(); ++j) {
      for (std::size_t d = 0; d < g.node_count(); ++d) {
        const auto out = g.out_edges(static_cast<JunctionId>(j));
        for (const Edge& a : out) {
          for (const Edge& b : out) {
            // Same junction, equal-or-shorter edge, strictly closer end.
            const JunctionId dest = static_cast<JunctionId>(d);
            if (a.length <= b.length && g.distance(a.to, dest) < g.distance(b.to, dest)) {
              EXPECT_GT(edge_score(g, a, dest), edge_score(g, b, dest));
            }
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace xmix
