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

#ifndef XMIX_DEMO_LLM_CLIENT_HPP_
#define XMIX_DEMO_LLM_CLIENT_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "xmix/error.hpp"

namespace xmix {

// Chat-completion endpoint settings. from_env() reads
//   XMIX_LLM_BASE_URL   e.g. https://api.openai.com/v1
//   XMIX_LLM_API_KEY
//   XMIX_LLM_MODEL      (default gpt-3.5-turbo)
//   XMIX_LLM_TIMEOUT    seconds (default 60)
struct EndpointConfig {
  std::string base_url;
  std::string api_key;
  std::string model = "gpt-3.5-turbo";
  double timeout_seconds = 60.0;
  double temperature = 0.2;
  int max_attempts = 3;
  double backoff_seconds = 1.0;  // doubled after every failed attempt

  static EndpointConfig from_env();
  bool configured() const { return !base_url.empty(); }
};

struct Completion {
  std::string text;
  std::int64_t tokens = 0;
  bool usage_reported = false;  // tokens came from the endpoint
  int attempts = 0;
};

class LlmError : public Error {
 public:
  using Error::Error;
};

// POSTs {model, messages:[{role:user, content:prompt}], temperature} to
// <base_url>/chat/completions and returns choices[0].message.content.
// Failed attempts (transport error, timeout, non-200) are retried with
// exponential backoff; LlmError after the last one.
Completion llm_generate(std::string_view prompt, const EndpointConfig& config);

}  // namespace xmix

#endif  // XMIX_DEMO_LLM_CLIENT_HPP_
