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

#include "xmix/demo/prompt.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace xmix {
namespace {

std::string path_text(const std::vector<JunctionId>& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(path[i]);
  }
  return s + "]";
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string default_task_description() {
  return "You are routing vehicles through a directed road network. Each "
         "vehicle starts at its start junction at its departure step and "
         "must reach its destination junction. Every step a vehicle "
         "traverses exactly one road. Each step costs time, moving closer "
         "to the destination is rewarded, and arriving earns a bonus. "
         "Propose the fastest valid route for every vehicle.";
}

PromptState make_prompt_state(const RoadGraph& graph,
                              std::span<const AgentSpec> agents,
                              std::string task_description) {
  PromptState state;
  state.task_description = std::move(task_description);
  std::ostringstream nodes;
  for (std::size_t j = 0; j < graph.node_count(); ++j) {
    const Point& p = graph.position(static_cast<JunctionId>(j));
    nodes << j << ' ' << format_number(p.x) << ' ' << format_number(p.y) << '\n';
  }
  state.node_table = nodes.str();
  std::ostringstream adj;
  for (std::size_t j = 0; j < graph.node_count(); ++j) {
    adj << j << " ->";
    bool first = true;
    for (const Edge& e : graph.out_edges(static_cast<JunctionId>(j))) {
      adj << (first ? " " : ", ") << e.to << ':' << format_number(e.length);
      first = false;
    }
    adj << '\n';
  }
  state.adjacency = adj.str();
  state.agents.assign(agents.begin(), agents.end());
  return state;
}

std::string build_prompt(const PromptState& state) {
  std::ostringstream p;
  p << "## Task\n" << state.task_description << "\n\n";
  p << "## Junctions (id x y)\n" << state.node_table << '\n';
  p << "## Directed roads (from -> to:length, ...)\n" << state.adjacency << '\n';
  p << "## Vehicles (id start destination departure_step)\n";
  for (const AgentSpec& a : state.agents) {
    p << a.agent_id << ' ' << a.start << ' ' << a.dest << ' ' << a.depart_time
      << '\n';
  }
  p << "\n## Output format\n"
       "Reply with one Python dictionary mapping every vehicle id to its "
       "waypoint list. Each list starts at the vehicle's start junction, ends "
       "at its destination, and only uses listed roads. Example: "
       "{0: [0, 1, 2], 1: [4, 3]}\n";
  for (const RefinementRecord& r : state.records) {
    p << "\n## Feedback round " << r.phase << " (training epoch " << r.epoch
      << ")\n";
    for (const AgentFeedback& f : r.agents) {
      p << "vehicle " << f.agent_id << ": explored " << path_text(f.explored_path)
        << " reward " << format_number(f.explored_reward) << "; suggested "
        << path_text(f.demonstrated_path) << " reward "
        << format_number(f.demonstrated_reward)
        << (f.demonstration_valid ? "" : " (suggested route was invalid)")
        << "; DTW " << format_number(f.dtw) << '\n';
    }
    p << "Revise routes that were invalid or earned a low reward.\n";
  }
  return p.str();
}

PromptState refine_prompt(PromptState state, int epoch,
                          std::vector<AgentFeedback> feedback) {
  RefinementRecord record;
  record.phase = state.records.empty() ? 1 : state.records.back().phase + 1;
  record.epoch = epoch;
  record.agents = std::move(feedback);
  state.records.push_back(std::move(record));
  return state;
}

std::int64_t count_tokens(std::string_view text) {
  std::int64_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

}  // namespace xmix
