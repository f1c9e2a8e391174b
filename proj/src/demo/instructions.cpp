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

#include "xmix/demo/instructions.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace xmix {
namespace {

std::string clip(std::string_view s, std::size_t max = 120) {
  return std::string(s.substr(0, std::min(max, s.size())));
}

// The first balanced {...} block, honoring quoted strings of either kind.
std::optional<std::string_view> find_mapping(std::string_view text) {
  const auto open = text.find('{');
  if (open == std::string_view::npos) return std::nullopt;
  int depth = 0;
  char quote = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (quote != 0) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return text.substr(open, i - open + 1);
    }
  }
  return std::nullopt;
}

std::string repair_python_dict(std::string_view src) {
  std::string out;
  out.reserve(src.size() + 16);
  bool in_single = false;
  bool in_double = false;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const char c = src[i];
    if (in_double) {
      out += c;
      if (c == '\\' && i + 1 < src.size()) {
        out += src[++i];
      } else if (c == '"') {
        in_double = false;
      }
    } else if (in_single) {
      if (c == '\\' && i + 1 < src.size()) {
        out += c;
        out += src[++i];
      } else if (c == '\'') {
        out += '"';
        in_single = false;
      } else if (c == '"') {
        out += "\\\"";
      } else {
        out += c;
      }
    } else if (c == '\'') {
      out += '"';
      in_single = true;
    } else {
      if (c == '"') in_double = true;
      out += c;
    }
  }
  static const std::regex bare_key(R"(([\{,]\s*)(-?\d+)(\s*:))");
  return std::regex_replace(out, bare_key, "$1\"$2\"$3");
}

std::optional<long long> trailing_int(std::string_view s) {
  static const std::regex tail(R"((\d+)\s*$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(s.begin(), s.end(), m, tail)) return std::nullopt;
  try {
    return std::stoll(m[1].str());
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<long long> junction_of(const nlohmann::json& v) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_string()) return trailing_int(v.get<std::string>());
  return std::nullopt;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::kMoveTo:
      return "MoveTo";
  }
  return "?";
}

std::vector<JunctionId> AgentInstructions::waypoints() const {
  std::vector<JunctionId> w;
  if (!origin) return w;
  w.push_back(*origin);
  for (const Instruction& ins : steps) w.push_back(ins.parameter);
  return w;
}

ExecutableSet routes_to_set(const std::vector<std::vector<JunctionId>>& routes) {
  ExecutableSet set;
  set.per_agent.resize(routes.size());
  for (std::size_t i = 0; i < routes.size(); ++i) {
    if (routes[i].empty()) continue;
    auto& agent = set.per_agent[i];
    agent.origin = routes[i].front();
    for (std::size_t k = 1; k < routes[i].size(); ++k) {
      agent.steps.push_back(
          Instruction{Command::kMoveTo, routes[i][k], static_cast<int>(i)});
    }
  }
  return set;
}

std::string format_instruction(const Instruction& ins) {
  std::ostringstream s;
  s << "[" << command_name(ins.command) << ", Intersection_" << ins.parameter
    << ", Agent_" << ins.agent_id << "]";
  return s.str();
}

const char* issue_name(ParseIssueKind kind) {
  switch (kind) {
    case ParseIssueKind::kUnextractable:
      return "unextractable mapping";
    case ParseIssueKind::kUnknownAgent:
      return "unknown agent id";
    case ParseIssueKind::kUnknownJunction:
      return "unknown junction id";
    case ParseIssueKind::kMissingAgent:
      return "missing agent";
  }
  return "?";
}

InstructionError::InstructionError(ParseIssue issue)
    : Error(std::string(issue_name(issue.kind)) + ": " + issue.fragment),
      issue_(std::move(issue)) {}

ParsedInstructions parse_instructions_lenient(std::string_view text,
                                              int n_agents,
                                              const RoadGraph& graph) {
  ParsedInstructions parsed;
  parsed.set.per_agent.resize(n_agents);
  parsed.agent_issues.resize(n_agents);

  const auto block = find_mapping(text);
  if (!block) {
    parsed.global_issue = ParseIssue{ParseIssueKind::kUnextractable, clip(text)};
    return parsed;
  }
  nlohmann::json doc = nlohmann::json::parse(*block, nullptr, false);
  if (doc.is_discarded()) {
    doc = nlohmann::json::parse(repair_python_dict(*block), nullptr, false);
  }
  if (doc.is_discarded() || !doc.is_object()) {
    parsed.global_issue = ParseIssue{ParseIssueKind::kUnextractable, clip(*block)};
    return parsed;
  }

  std::vector<char> seen(n_agents, 0);
  for (const auto& [key, value] : doc.items()) {
    const auto id = trailing_int(key);
    if (!id || *id < 0 || *id >= n_agents) {
      parsed.unattributed.push_back(ParseIssue{ParseIssueKind::kUnknownAgent, key});
      continue;
    }
    const int agent = static_cast<int>(*id);
    seen[agent] = 1;
    parsed.agent_issues[agent].reset();
    if (!value.is_array() || value.empty()) {
      parsed.agent_issues[agent] =
          ParseIssue{ParseIssueKind::kUnknownJunction, key + ": " + value.dump()};
      continue;
    }
    std::vector<JunctionId> route;
    for (const auto& v : value) {
      const auto j = junction_of(v);
      if (!j || *j < 0 || *j >= static_cast<long long>(graph.node_count())) {
        parsed.agent_issues[agent] =
            ParseIssue{ParseIssueKind::kUnknownJunction, v.dump()};
        route.clear();
        break;
      }
      route.push_back(static_cast<JunctionId>(*j));
    }
    if (route.empty()) continue;
    auto& slot = parsed.set.per_agent[agent];
    slot.origin = route.front();
    slot.steps.clear();
    for (std::size_t k = 1; k < route.size(); ++k) {
      slot.steps.push_back(Instruction{Command::kMoveTo, route[k], agent});
    }
  }
  for (int a = 0; a < n_agents; ++a) {
    if (!seen[a] && !parsed.agent_issues[a]) {
      parsed.agent_issues[a] =
          ParseIssue{ParseIssueKind::kMissingAgent, std::to_string(a)};
    }
  }
  return parsed;
}

ExecutableSet parse_instructions(std::string_view text, int n_agents,
                                 const RoadGraph& graph) {
  ParsedInstructions parsed = parse_instructions_lenient(text, n_agents, graph);
  if (parsed.global_issue) throw InstructionError(*parsed.global_issue);
  if (!parsed.unattributed.empty()) {
    throw InstructionError(parsed.unattributed.front());
  }
  for (const auto& issue : parsed.agent_issues) {
    if (issue && issue->kind != ParseIssueKind::kMissingAgent) {
      throw InstructionError(*issue);
    }
  }
  return std::move(parsed.set);
}

bool validate_route(const RoadGraph& graph, const AgentSpec& spec,
                    std::span<const JunctionId> waypoints) {
  if (waypoints.size() < 2) return false;
  if (waypoints.front() != spec.start || waypoints.back() != spec.dest) {
    return false;
  }
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    if (!graph.edge_index(waypoints[i], waypoints[i + 1])) return false;
  }
  return true;
}

std::vector<int> compile_to_actions(const RoadGraph& graph,
                                    const AgentSpec& spec,
                                    std::span<const JunctionId> waypoints) {
  if (!validate_route(graph, spec, waypoints)) {
    throw PreconditionError("compile_to_actions: route of agent " +
                            std::to_string(spec.agent_id) + " is not valid");
  }
  std::vector<int> actions;
  actions.reserve(waypoints.size() - 1);
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    actions.push_back(
        static_cast<int>(*graph.edge_index(waypoints[i], waypoints[i + 1])));
  }
  return actions;
}

double validity_rate(std::span<const std::uint8_t> valid) {
  if (valid.empty()) return 0.0;
  const auto ok = std::count_if(valid.begin(), valid.end(),
                                [](std::uint8_t v) { return v != 0; });
  return 100.0 * static_cast<double>(ok) / static_cast<double>(valid.size());
}

}  // namespace xmix
