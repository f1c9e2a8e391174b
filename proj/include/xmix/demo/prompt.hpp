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

#ifndef XMIX_DEMO_PROMPT_HPP_
#define XMIX_DEMO_PROMPT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmix/env/road_env.hpp"
#include "xmix/env/road_graph.hpp"

namespace xmix {

struct AgentFeedback {
  int agent_id = 0;
  std::vector<JunctionId> explored_path;      // from the policy rollout
  double explored_reward = 0.0;
  std::vector<JunctionId> demonstrated_path;  // from the executed instructions
  double demonstrated_reward = 0.0;
  bool demonstration_valid = true;
  double dtw = 0.0;
};

struct RefinementRecord {
  int phase = 0;  // 1-based, strictly increasing
  int epoch = 0;
  std::vector<AgentFeedback> agents;
};

// Everything the route generator is told. Records are append-only.
struct PromptState {
  std::string task_description;
  std::string node_table;
  std::string adjacency;
  std::vector<AgentSpec> agents;
  std::vector<RefinementRecord> records;
};

std::string default_task_description();

PromptState make_prompt_state(const RoadGraph& graph,
                              std::span<const AgentSpec> agents,
                              std::string task_description = default_task_description());

// Deterministic: task, junction table, adjacency list, agent table,
// output-format contract, then every refinement record in order.
std::string build_prompt(const PromptState& state);

// Appends one phase-stamped record.
PromptState refine_prompt(PromptState state, int epoch,
                          std::vector<AgentFeedback> feedback);

// Whitespace-separated chunk count.
std::int64_t count_tokens(std::string_view text);

// Shortest round-trip decimal form used in prompts and reports.
std::string format_number(double v);

}  // namespace xmix

#endif  // XMIX_DEMO_PROMPT_HPP_
