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

#include "xmix/env/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "xmix/error.hpp"

namespace xmix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Single-source Dijkstra that skips banned edges (by global index) and
// banned junctions. Returns distances and the predecessor edge index.
struct SearchResult {
  std::vector<double> dist;
  std::vector<std::ptrdiff_t> pred_edge;
};

SearchResult dijkstra(const RoadGraph& graph, JunctionId source,
                      const std::vector<char>& banned_edge,
                      const std::vector<char>& banned_node) {
  const std::size_t n = graph.node_count();
  SearchResult r{std::vector<double>(n, kInf),
                 std::vector<std::ptrdiff_t>(n, -1)};
  using Item = std::pair<double, JunctionId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  r.dist[source] = 0.0;
  heap.emplace(0.0, source);
  const Edge* base = graph.edges().data();
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > r.dist[u]) continue;
    for (const Edge& e : graph.out_edges(u)) {
      const auto idx = &e - base;
      if (!banned_edge.empty() && banned_edge[idx]) continue;
      if (!banned_node.empty() && banned_node[e.to]) continue;
      const double nd = d + e.length;
      if (nd < r.dist[e.to]) {
        r.dist[e.to] = nd;
        r.pred_edge[e.to] = idx;
        heap.emplace(nd, e.to);
      }
    }
  }
  return r;
}

}  // namespace

RoadGraph::RoadGraph(std::vector<Point> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const std::size_t n = nodes_.size();
  if (n == 0) throw FormatError("graph has no nodes");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!contains(e.from) || !contains(e.to)) {
      std::ostringstream msg;
      msg << "edge " << i << " (" << e.from << "->" << e.to
          << ") references missing node "
          << (contains(e.from) ? e.to : e.from);
      throw FormatError(msg.str());
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      std::ostringstream msg;
      msg << "edge " << i << " (" << e.from << "->" << e.to
          << ") has non-positive length " << e.length;
      throw FormatError(msg.str());
    }
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const Edge& a, const Edge& b) {
                     if (a.from != b.from) return a.from < b.from;
                     if (a.to != b.to) return a.to < b.to;
                     return a.length < b.length;
                   });
  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) ++offsets_[e.from + 1];
  for (std::size_t i = 0; i < n; ++i) {
    max_out_degree_ = std::max(max_out_degree_, offsets_[i + 1]);
    offsets_[i + 1] += offsets_[i];
  }

  dist_.assign(n * n, kInf);
  double diameter = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const SearchResult r = dijkstra(*this, static_cast<JunctionId>(s), {}, {});
    std::copy(r.dist.begin(), r.dist.end(), dist_.begin() + s * n);
    for (double d : r.dist) {
      if (std::isfinite(d)) diameter = std::max(diameter, d);
    }
  }
  diameter_ = diameter > 0.0 ? diameter : 1.0;
}

std::span<const Edge> RoadGraph::out_edges(JunctionId j) const {
  return std::span<const Edge>(edges_).subspan(offsets_[j],
                                               offsets_[j + 1] - offsets_[j]);
}

bool RoadGraph::reachable(JunctionId from, JunctionId to) const {
  return std::isfinite(distance(from, to));
}

std::optional<std::size_t> RoadGraph::edge_index(JunctionId u,
                                                 JunctionId v) const {
  if (!contains(u)) return std::nullopt;
  const auto out = out_edges(u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].to == v) return i;
  }
  return std::nullopt;
}

RoadGraph load_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("graph JSON parse failure: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array() ||
      !doc.contains("edges") || !doc["edges"].is_array()) {
    throw FormatError("graph JSON must be an object with 'nodes' and 'edges' arrays");
  }
  const auto& jnodes = doc["nodes"];
  std::vector<Point> nodes(jnodes.size());
  std::vector<char> seen(jnodes.size(), 0);
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const auto& jn = jnodes[i];
    if (!jn.is_object() || !jn.contains("id") || !jn["id"].is_number_integer()) {
      throw FormatError("node entry " + std::to_string(i) + " lacks an integer 'id'");
    }
    const auto id = jn["id"].get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= jnodes.size()) {
      throw FormatError("node id " + std::to_string(id) +
                        " is outside the dense range 0.." +
                        std::to_string(jnodes.size() - 1));
    }
    if (seen[id]) throw FormatError("duplicate node id " + std::to_string(id));
    seen[id] = 1;
    nodes[id] = Point{jn.value("x", 0.0), jn.value("y", 0.0)};
  }
  const auto& jedges = doc["edges"];
  std::vector<Edge> edges;
  edges.reserve(jedges.size());
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const auto& je = jedges[i];
    if (!je.is_object() || !je.contains("from") || !je.contains("to") ||
        !je.contains("length") || !je["length"].is_number()) {
      throw FormatError("edge entry " + std::to_string(i) +
                        " needs 'from', 'to' and numeric 'length'");
    }
    for (const char* end : {"from", "to"}) {
      if (!je[end].is_number_integer()) {
        throw FormatError("edge entry " + std::to_string(i) + " has dangling endpoint " +
                          je[end].dump() + " (not a node id)");
      }
    }
    edges.push_back(Edge{je["from"].get<int>(), je["to"].get<int>(),
                         je["length"].get<double>()});
  }
  return RoadGraph(std::move(nodes), std::move(edges));
}

RoadGraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

std::string graph_to_json(const RoadGraph& graph) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const Point& p = graph.position(static_cast<JunctionId>(i));
    doc["nodes"].push_back({{"id", i}, {"x", p.x}, {"y", p.y}});
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : graph.edges()) {
    doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"length", e.length}});
  }
  return doc.dump(1);
}

std::optional<Path> shortest_path(const RoadGraph& graph, JunctionId from,
                                  JunctionId to) {
  if (!graph.contains(from) || !graph.contains(to)) {
    throw PreconditionError("shortest_path: junction not in graph");
  }
  if (!graph.reachable(from, to)) return std::nullopt;
  Path path;
  path.junctions.push_back(from);
  JunctionId u = from;
  while (u != to) {
    const double remaining = graph.distance(u, to);
    bool advanced = false;
    // out_edges is ordered by ascending destination id, so the first edge on
    // a shortest path gives the lexicographically smallest continuation.
    for (const Edge& e : graph.out_edges(u)) {
      const double via = graph.distance(e.to, to);
      if (std::isfinite(via) && nearly_equal(e.length + via, remaining)) {
        path.length += e.length;
        path.junctions.push_back(e.to);
        u = e.to;
        advanced = true;
        break;
      }
    }
    if (!advanced) throw NumericError("shortest_path: inconsistent distance table");
  }
  return path;
}

std::vector<Path> k_shortest_paths(const RoadGraph& graph, JunctionId from,
                                   JunctionId to, std::size_t k) {
  std::vector<Path> result;
  if (k == 0) return result;
  auto first = shortest_path(graph, from, to);
  if (!first) return result;
  result.push_back(std::move(*first));

  auto path_less = [](const Path& a, const Path& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.junctions < b.junctions;
  };
  std::set<Path, decltype(path_less)> candidates(path_less);
  const Edge* base = graph.edges().data();

  while (result.size() < k) {
    const Path& last = result.back();
    for (std::size_t i = 0; i + 1 < last.junctions.size(); ++i) {
      const JunctionId spur = last.junctions[i];
      std::vector<JunctionId> root(last.junctions.begin(),
                                   last.junctions.begin() + i + 1);
      double root_len = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        root_len += graph.out_edges(root[j])[*graph.edge_index(root[j], root[j + 1])].length;
      }
      std::vector<char> banned_edge(graph.edge_count(), 0);
      for (const Path& p : result) {
        if (p.junctions.size() > i + 1 &&
            std::equal(root.begin(), root.end(), p.junctions.begin())) {
          const auto idx = graph.edge_index(p.junctions[i], p.junctions[i + 1]);
          banned_edge[&graph.out_edges(p.junctions[i])[*idx] - base] = 1;
        }
      }
      std::vector<char> banned_node(graph.node_count(), 0);
      for (std::size_t j = 0; j < i; ++j) banned_node[root[j]] = 1;

      const SearchResult sr = dijkstra(graph, spur, banned_edge, banned_node);
      if (!std::isfinite(sr.dist[to])) continue;
      std::vector<JunctionId> spur_path;
      for (JunctionId v = to; v != spur; v = base[sr.pred_edge[v]].from) {
        spur_path.push_back(v);
      }
      Path cand;
      cand.junctions = root;
      cand.junctions.insert(cand.junctions.end(), spur_path.rbegin(),
                            spur_path.rend());
      cand.length = root_len + sr.dist[to];
      candidates.insert(std::move(cand));
    }
    if (candidates.empty()) break;
    // Skip candidates already accepted.
    bool added = false;
    while (!candidates.empty() && !added) {
      Path next = *candidates.begin();
      candidates.erase(candidates.begin());
      const bool dup = std::any_of(result.begin(), result.end(), [&](const Path& p) {
        return p.junctions == next.junctions;
      });
      if (!dup) {
        result.push_back(std::move(next));
        added = true;
      }
    }
    if (!added) break;
  }
  return result;
}

double edge_score(const RoadGraph& graph, const Edge& edge, JunctionId dest) {
  const double remaining = graph.distance(edge.to, dest);
  if (!std::isfinite(remaining)) return kUnreachableScore;
  return -(edge.length + remaining) / graph.diameter();
}

}  // namespace xmix
