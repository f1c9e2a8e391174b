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

#include <atomic>
#include <chrono>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "xmix/demo/llm_client.hpp"
#include "xmix/demo/prompt.hpp"
#include "xmix/demo/provider.hpp"
#include "xmix/env/fixtures.hpp"

namespace xmix {
namespace {

// Chat-completion stand-in on a loopback port. The first `failures` calls
// answer 503; `delay` stalls every reply.
class FakeEndpoint {
 public:
  FakeEndpoint(std::string content, bool with_usage, int failures = 0,
               std::chrono::milliseconds delay = {})
      : content_(std::move(content)), with_usage_(with_usage), failures_(failures) {
    server_.Post("/v1/chat/completions", [this, delay](const httplib::Request& req,
                                                       httplib::Response& res) {
      const int n = ++calls_;
      last_body_ = req.body;
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
      if (n <= failures_) {
        res.status = 503;
        return;
      }
      nlohmann::json doc;
      doc["choices"] = {{{"message", {{"role", "assistant"}, {"content", content_}}}}};
      if (with_usage_) doc["usage"] = {{"total_tokens", 1234}};
      res.set_content(doc.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  EndpointConfig config() const {
    EndpointConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    c.backoff_seconds = 0.01;
    c.timeout_seconds = 5.0;
    return c;
  }
  int calls() const { return calls_; }
  const std::string& last_body() const { return last_body_; }

 private:
  httplib::Server server_;
  std::string content_;
  bool with_usage_;
  int failures_;
  std::atomic<int> calls_{0};
  std::string last_body_;
  int port_ = 0;
  std::thread thread_;
};

TEST(LlmClient, ReturnsContentAndReportedUsage) {
  FakeEndpoint fake(R"({"0":[0,1,2]})", true);
  EndpointConfig cfg = fake.config();
  cfg.model = "test-model";
  const Completion c = llm_generate("route please", cfg);
  EXPECT_EQ(c.text, R"({"0":[0,1,2]})");
  EXPECT_EQ(c.tokens, 1234);
  EXPECT_TRUE(c.usage_reported);
  EXPECT_EQ(c.attempts, 1);
  const auto body = nlohmann::json::parse(fake.last_body());
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][0]["content"], "route please");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.2);
}

TEST(LlmClient, CountsWhitespaceTokensWithoutUsage) {
  FakeEndpoint fake("three word reply", false);
  const Completion c = llm_generate("two words", fake.config());
  EXPECT_FALSE(c.usage_reported);
  EXPECT_EQ(c.tokens, 5);
}

TEST(LlmClient, RetriesThenSucceeds) {
  FakeEndpoint fake("ok", false, 2);
  const Completion c = llm_generate("x", fake.config());
  EXPECT_EQ(c.attempts, 3);
  EXPECT_EQ(fake.calls(), 3);
}

TEST(LlmClient, GivesUpAfterThreeAttempts) {
  FakeEndpoint fake("ok", false, 10);
  EXPECT_THROW(llm_generate("x", fake.config()), LlmError);
  EXPECT_EQ(fake.calls(), 3);
  EXPECT_THROW(llm_generate("x", EndpointConfig{}), LlmError);
}

TEST(LlmClient, TimeoutFallsBackToOracle) {
  FakeEndpoint fake("{}", false, 0, std::chrono::milliseconds(600));
  EndpointConfig cfg = fake.config();
  cfg.timeout_seconds = 0.1;
  const RoadGraph g = make_line({1.0, 1.0});
  const std::vector<AgentSpec> specs{{0, 0, 2, 0}};
  FallbackProvider provider(std::make_unique<LlmProvider>(cfg),
                            std::make_unique<OracleProvider>());
  const DemoBatch batch = provider.generate(make_prompt_state(g, specs), g, specs);
  EXPECT_TRUE(batch.fell_back);
  EXPECT_EQ(provider.fallbacks(), 1u);
  EXPECT_EQ(batch.set.per_agent[0].waypoints(), (std::vector<JunctionId>{0, 1, 2}));
}

TEST(LlmClient, EndToEndParseThroughProvider) {
  FakeEndpoint fake("Sure! {0: [0, 1, 2]}", true);
  const RoadGraph g = make_line({1.0, 1.0});
  const std::vector<AgentSpec> specs{{0, 0, 2, 0}};
  LlmProvider provider(fake.config());
  const DemoBatch batch = provider.generate(make_prompt_state(g, specs), g, specs);
  EXPECT_FALSE(batch.issues[0]);
  EXPECT_EQ(batch.tokens, 1234);
  EXPECT_EQ(batch.set.per_agent[0].waypoints(), (std::vector<JunctionId>{0, 1, 2}));
}

TEST(MockProvider, ScriptedResponsesAndFailures) {
  const RoadGraph g = make_line({1.0, 1.0});
  const std::vector<AgentSpec> specs{{0, 0, 2, 0}};
  const PromptState prompt = make_prompt_state(g, specs);
  MockProvider mock(std::string(XMIX_TEST_DATA) + "/mock_line");
  const DemoBatch ok = mock.generate(prompt, g, specs);
  EXPECT_FALSE(ok.issues[0]);
  const DemoBatch bad = mock.generate(prompt, g, specs);
  ASSERT_TRUE(bad.issues[0]);
  EXPECT_EQ(bad.issues[0]->kind, ParseIssueKind::kUnextractable);
  EXPECT_THROW(mock.generate(prompt, g, specs), LlmError);
  EXPECT_EQ(mock.calls(), 3u);
  EXPECT_THROW(MockProvider(std::string(XMIX_TEST_DATA) + "/no_such_dir"), NotFoundError);
}

}  // namespace
}  // namespace xmix
