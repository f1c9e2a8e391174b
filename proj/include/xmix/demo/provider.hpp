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

#ifndef XMIX_DEMO_PROVIDER_HPP_
#define XMIX_DEMO_PROVIDER_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xmix/demo/instructions.hpp"
#include "xmix/demo/llm_client.hpp"
#include "xmix/demo/prompt.hpp"
#include "xmix/rng.hpp"

namespace xmix {

// One sampled instruction set E and how it was obtained.
struct DemoBatch {
  ExecutableSet set;
  std::vector<std::optional<ParseIssue>> issues;  // per agent
  std::string raw_text;                           // empty for offline experts
  std::int64_t tokens = 0;
  std::string provider;
  bool fell_back = false;
};

class ExpertProvider {
 public:
  virtual ~ExpertProvider() = default;
  virtual std::string name() const = 0;
  // Throws LlmError (or another xmix::Error) when no set can be produced.
  virtual DemoBatch generate(const PromptState& prompt, const RoadGraph& graph,
                             std::span<const AgentSpec> specs) = 0;
};

class OracleProvider final : public ExpertProvider {
 public:
  std::string name() const override { return "oracle"; }
  DemoBatch generate(const PromptState& prompt, const RoadGraph& graph,
                     std::span<const AgentSpec> specs) override;
};

class LogitProvider final : public ExpertProvider {
 public:
  LogitProvider(double temperature, std::uint64_t seed)
      : temperature_(temperature), rng_(seed) {}
  std::string name() const override { return "logit"; }
  DemoBatch generate(const PromptState& prompt, const RoadGraph& graph,
                     std::span<const AgentSpec> specs) override;

 private:
  double temperature_;
  Rng rng_;
};

// Shared path for text-producing providers: prompt -> text -> parse.
class TextProvider : public ExpertProvider {
 public:
  DemoBatch generate(const PromptState& prompt, const RoadGraph& graph,
                     std::span<const AgentSpec> specs) final;

 protected:
  virtual Completion complete(const std::string& prompt) = 0;
};

class LlmProvider final : public TextProvider {
 public:
  explicit LlmProvider(EndpointConfig config) : config_(std::move(config)) {}
  std::string name() const override { return "llm"; }

 private:
  Completion complete(const std::string& prompt) override;
  EndpointConfig config_;
};

// Scripted responses from <dir>/<number>.txt, consumed in numeric order and
// cycled. A file whose content starts with "!timeout" or "!error" makes that
// call fail with LlmError.
class MockProvider final : public TextProvider {
 public:
  explicit MockProvider(const std::filesystem::path& dir);
  std::string name() const override { return "mock"; }
  std::size_t calls() const { return calls_; }

 private:
  Completion complete(const std::string& prompt) override;
  std::vector<std::string> responses_;
  std::size_t calls_ = 0;
};

// Tries `primary`, and on failure returns `fallback`'s set flagged
// fell_back.
class FallbackProvider final : public ExpertProvider {
 public:
  FallbackProvider(std::unique_ptr<ExpertProvider> primary,
                   std::unique_ptr<ExpertProvider> fallback)
      : primary_(std::move(primary)), fallback_(std::move(fallback)) {}
  std::string name() const override { return primary_->name(); }
  DemoBatch generate(const PromptState& prompt, const RoadGraph& graph,
                     std::span<const AgentSpec> specs) override;
  std::size_t fallbacks() const { return fallbacks_; }

 private:
  std::unique_ptr<ExpertProvider> primary_;
  std::unique_ptr<ExpertProvider> fallback_;
  std::size_t fallbacks_ = 0;
};

}  // namespace xmix

#endif  // XMIX_DEMO_PROVIDER_HPP_
