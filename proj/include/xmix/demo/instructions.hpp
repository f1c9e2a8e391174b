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

#ifndef XMIX_DEMO_INSTRUCTIONS_HPP_
#define XMIX_DEMO_INSTRUCTIONS_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmix/env/road_env.hpp"
#include "xmix/env/road_graph.hpp"
#include "xmix/error.hpp"

namespace xmix {

// Only routing is in scope; the three-field shape leaves room for more.
enum class Command { kMoveTo };

const char* command_name(Command c);

// [Command, Parameter, AgentID], e.g. [MoveTo, 5, 3].
struct Instruction {
  Command command = Command::kMoveTo;
  JunctionId parameter = 0;
  int agent_id = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// One agent's instruction sequence. `origin` is the first waypoint the
// producer stated; it is implied, not an instruction. Absent for agents the
// producer gave no route.
struct AgentInstructions {
  std::optional<JunctionId> origin;
  std::vector<Instruction> steps;

  // origin followed by every MoveTo target; empty without an origin.
  std::vector<JunctionId> waypoints() const;
  friend bool operator==(const AgentInstructions&, const AgentInstructions&) = default;
};

// Per-agent sequences for agents 0..n-1 (possibly empty).
struct ExecutableSet {
  std::vector<AgentInstructions> per_agent;

  std::size_t agent_count() const { return per_agent.size(); }
  friend bool operator==(const ExecutableSet&, const ExecutableSet&) = default;
};

ExecutableSet routes_to_set(const std::vector<std::vector<JunctionId>>& routes);
std::string format_instruction(const Instruction& ins);

enum class ParseIssueKind {
  kUnextractable,    // no mapping could be recovered from the text
  kUnknownAgent,     // key does not name an agent 0..n-1
  kUnknownJunction,  // waypoint is not a junction of the graph
  kMissingAgent,     // mapping has no entry for this agent
};

const char* issue_name(ParseIssueKind kind);

struct ParseIssue {
  ParseIssueKind kind = ParseIssueKind::kUnextractable;
  std::string fragment;  // offending piece of the model output
};

class InstructionError : public Error {
 public:
  explicit InstructionError(ParseIssue issue);
  const ParseIssue& issue() const { return issue_; }

 private:
  ParseIssue issue_;
};

struct ParsedInstructions {
  ExecutableSet set;
  // Set when nothing at all could be extracted.
  std::optional<ParseIssue> global_issue;
  // Per agent; agents with an issue have an empty sequence in `set`.
  std::vector<std::optional<ParseIssue>> agent_issues;
  // Keys that name no agent 0..n-1; ignored by the lenient path.
  std::vector<ParseIssue> unattributed;

  bool agent_ok(int agent) const {
    return !global_issue && !agent_issues[agent];
  }
};

// Tolerant extraction: strict JSON first, then one repair pass converting
// single-quoted strings and bare integer keys (Python dict syntax). Anything
// still unparseable is reported, never repaired further.
ParsedInstructions parse_instructions_lenient(std::string_view text,
                                              int n_agents,
                                              const RoadGraph& graph);

// Same extraction, but the first issue (other than a missing agent) is
// thrown as InstructionError.
ExecutableSet parse_instructions(std::string_view text, int n_agents,
                                 const RoadGraph& graph);

// Starts at spec.start, ends at spec.dest, every hop an existing edge.
bool validate_route(const RoadGraph& graph, const AgentSpec& spec,
                    std::span<const JunctionId> waypoints);

// Action index of every hop within the current junction's ordered edges.
// Throws PreconditionError unless validate_route holds.
std::vector<int> compile_to_actions(const RoadGraph& graph,
                                    const AgentSpec& spec,
                                    std::span<const JunctionId> waypoints);

// (#valid / #total) * 100; 0 for an empty batch.
double validity_rate(std::span<const std::uint8_t> valid);

}  // namespace xmix

#endif  // XMIX_DEMO_INSTRUCTIONS_HPP_
