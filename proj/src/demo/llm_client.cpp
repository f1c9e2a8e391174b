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

#include "xmix/demo/llm_client.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "xmix/demo/prompt.hpp"

namespace xmix {
namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

// Splits "scheme://host[:port][/prefix]" into origin and path prefix.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw LlmError("endpoint URL lacks a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

}  // namespace

EndpointConfig EndpointConfig::from_env() {
  EndpointConfig c;
  c.base_url = env_or("XMIX_LLM_BASE_URL", "");
  c.api_key = env_or("XMIX_LLM_API_KEY", "");
  c.model = env_or("XMIX_LLM_MODEL", c.model);
  const std::string timeout = env_or("XMIX_LLM_TIMEOUT", "");
  if (!timeout.empty()) c.timeout_seconds = std::stod(timeout);
  return c;
}

Completion llm_generate(std::string_view prompt, const EndpointConfig& config) {
  if (!config.configured()) throw LlmError("LLM endpoint is not configured");
  const auto [origin, prefix] = split_url(config.base_url);

  nlohmann::json body;
  body["model"] = config.model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "user"}, {"content", std::string(prompt)}}});
  body["temperature"] = config.temperature;
  const std::string payload = body.dump();

  httplib::Client client(origin);
  const auto timeout = std::chrono::duration<double>(config.timeout_seconds);
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (!config.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config.api_key);
  }

  std::string last_error;
  double backoff = config.backoff_seconds;
  const int attempts = std::max(1, config.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2.0;
    }
    auto res = client.Post(prefix + "/chat/completions", headers, payload,
                           "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    const auto doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty()) {
      last_error = "malformed completion response";
      continue;
    }
    Completion out;
    out.attempts = attempt;
    out.text = doc["choices"][0].value("message", nlohmann::json::object())
                   .value("content", std::string());
    if (doc.contains("usage") && doc["usage"].contains("total_tokens")) {
      out.tokens = doc["usage"]["total_tokens"].get<std::int64_t>();
      out.usage_reported = true;
    } else {
      out.tokens = count_tokens(prompt) + count_tokens(out.text);
    }
    return out;
  }
  throw LlmError("LLM request failed after " + std::to_string(attempts) +
                 " attempts: " + last_error);
}

}  // namespace xmix
