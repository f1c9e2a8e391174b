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

#ifndef XMIX_ENV_ROAD_GRAPH_HPP_
#define XMIX_ENV_ROAD_GRAPH_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xmix {

using JunctionId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  JunctionId from = 0;
  JunctionId to = 0;
  double length = 0.0;  // meters, > 0
};

struct Path {
  double length = 0.0;
  std::vector<JunctionId> junctions;
};

// Directed weighted road network with planar junction coordinates.
//
// Junction ids are dense, 0..node_count()-1. Outgoing edges of each junction
// are ordered by ascending destination id (then by length), and that order
// defines the action index space of the environment. All-pairs shortest
// distances are computed once at construction.
class RoadGraph {
 public:
  RoadGraph() = default;
  // Validates and indexes. Throws FormatError naming the offending entity.
  RoadGraph(std::vector<Point> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool contains(JunctionId j) const {
    return j >= 0 && static_cast<std::size_t>(j) < nodes_.size();
  }
  const Point& position(JunctionId j) const { return nodes_[j]; }
  std::span<const Point> nodes() const { return nodes_; }
  // Every edge, grouped by source junction in action order.
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Edge> out_edges(JunctionId j) const;
  std::size_t out_degree(JunctionId j) const { return out_edges(j).size(); }
  // m: the largest out-degree.
  std::size_t max_out_degree() const { return max_out_degree_; }

  // Shortest directed distance, +infinity when unreachable.
  double distance(JunctionId from, JunctionId to) const {
    return dist_[static_cast<std::size_t>(from) * nodes_.size() + to];
  }
  bool reachable(JunctionId from, JunctionId to) const;
  // Largest finite pairwise distance (1.0 for graphs without any path).
  double diameter() const { return diameter_; }

  // Index of the edge u->v within out_edges(u), if it exists.
  std::optional<std::size_t> edge_index(JunctionId u, JunctionId v) const;

 private:
  std::vector<Point> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;  // node_count + 1 entries into edges_
  std::vector<double> dist_;
  std::size_t max_out_degree_ = 0;
  double diameter_ = 1.0;
};

// Parses the JSON graph schema:
//   {"nodes":[{"id":0,"x":0.0,"y":0.0},...],
//    "edges":[{"from":0,"to":1,"length":100.0},...]}
RoadGraph load_graph(std::string_view text);
RoadGraph load_graph_file(const std::string& path);
std::string graph_to_json(const RoadGraph& graph);

// Exact shortest path by summed length. Among equally short paths the
// lexicographically smallest junction sequence wins.
std::optional<Path> shortest_path(const RoadGraph& graph, JunctionId from,
                                  JunctionId to);

// Up to `k` loopless paths in order of increasing length (Yen).
std::vector<Path> k_shortest_paths(const RoadGraph& graph, JunctionId from,
                                   JunctionId to, std::size_t k);

inline constexpr double kUnreachableScore = -10.0;

// -(edge length + remaining distance from edge.to to dest) / diameter,
// or kUnreachableScore when dest cannot be reached from edge.to.
double edge_score(const RoadGraph& graph, const Edge& edge, JunctionId dest);

}  // namespace xmix

#endif  // XMIX_ENV_ROAD_GRAPH_HPP_
