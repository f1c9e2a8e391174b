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

#include "xmix/demo/provider.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "xmix/demo/experts.hpp"

namespace xmix {

DemoBatch OracleProvider::generate(const PromptState&, const RoadGraph& graph,
                                   std::span<const AgentSpec> specs) {
  DemoBatch batch;
  batch.set = oracle_expert(graph, specs);
  batch.issues.resize(specs.size());
  batch.provider = name();
  return batch;
}

DemoBatch LogitProvider::generate(const PromptState&, const RoadGraph& graph,
                                  std::span<const AgentSpec> specs) {
  DemoBatch batch;
  batch.set = logit_expert(graph, specs, temperature_, rng_);
  batch.issues.resize(specs.size());
  batch.provider = name();
  return batch;
}

DemoBatch TextProvider::generate(const PromptState& prompt,
                                 const RoadGraph& graph,
                                 std::span<const AgentSpec> specs) {
  const std::string text = build_prompt(prompt);
  Completion completion = complete(text);
  ParsedInstructions parsed = parse_instructions_lenient(
      completion.text, static_cast<int>(specs.size()), graph);
  DemoBatch batch;
  batch.set = std::move(parsed.set);
  batch.issues = std::move(parsed.agent_issues);
  if (parsed.global_issue) {
    for (auto& issue : batch.issues) issue = parsed.global_issue;
  }
  batch.raw_text = std::move(completion.text);
  batch.tokens = completion.tokens;
  batch.provider = name();
  return batch;
}

Completion LlmProvider::complete(const std::string& prompt) {
  return llm_generate(prompt, config_);
}

MockProvider::MockProvider(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw NotFoundError("mock provider directory not found: " + dir.string());
  }
  std::vector<std::pair<long long, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string stem = entry.path().stem().string();
    if (stem.empty() ||
        !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    files.emplace_back(std::stoll(stem), entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& [index, path] : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    responses_.push_back(buf.str());
  }
  if (responses_.empty()) {
    throw Error("mock provider directory has no numbered files: " + dir.string());
  }
}

Completion MockProvider::complete(const std::string& prompt) {
  const std::string& response = responses_[calls_ % responses_.size()];
  ++calls_;
  if (response.starts_with("!timeout")) throw LlmError("mock endpoint: timeout");
  if (response.starts_with("!error")) throw LlmError("mock endpoint: error");
  Completion c;
  c.text = response;
  c.tokens = count_tokens(prompt) + count_tokens(response);
  c.attempts = 1;
  return c;
}

DemoBatch FallbackProvider::generate(const PromptState& prompt,
                                     const RoadGraph& graph,
                                     std::span<const AgentSpec> specs) {
  try {
    return primary_->generate(prompt, graph, specs);
  } catch (const Error&) {
    ++fallbacks_;
    DemoBatch batch = fallback_->generate(prompt, graph, specs);
    batch.fell_back = true;
    return batch;
  }
}

}  // namespace xmix
