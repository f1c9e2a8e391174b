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

#ifndef XMIX_TRAIN_CONFIG_HPP_
#define XMIX_TRAIN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "xmix/demo/experts.hpp"
#include "xmix/demo/llm_client.hpp"
#include "xmix/env/fixtures.hpp"
#include "xmix/env/road_env.hpp"

namespace xmix {

enum class TrainMode { kLeed, kIppo, kFixedAlpha, kLogitPpo };
enum class ProviderKind { kNone, kOracle, kLogit, kLlm, kMock };
// How raw advantages are conditioned before the surrogate. kPositive keeps
// max(A, 0) unscaled.
enum class AdvantageNorm { kStandardize, kScale, kNone, kPositive };
// Critic whose estimate is subtracted from expert returns.
enum class ExpertBaseline { kAgent, kExpert };

// Every hyperparameter of a run. JSON layout (all keys optional):
//   {"graph": "data/grid5.json" | "builtin:grid:5" | "builtin:hilly",
//    "agents": {"count":10,"min_hops":1,"depart_spread":0,
//               "explicit":[{"start":0,"dest":24,"depart":0},...]},
//    "env": {"step_limit":200,"time_penalty":0.1,"shaping":1.0,
//            "arrival_bonus":10.0,"congestion":false,"congestion_penalty":0.1},
//    "train": {"epochs":500,"gamma":0.99,"epsilon":0.2,"beta":0.01,
//              "lr":3e-4,"q":5,"update_epochs":4,"hidden":128,
//              "mode":"leed"|"ippo"|"fixed-alpha:0.5"|"logit-ppo",
//              "seed":0,"checkpoint_every":0,"threads":1,
//              "agent_advantage_norm":"standardize"|"scale"|"none"|"positive",
//              "expert_advantage_norm":...,
//              "expert_baseline":"agent"|"expert"},
//    "expert": {"provider":"oracle"|"logit"|"llm"|"mock"|"none",
//               "fallback":"oracle"|"logit"|"none","mock_dir":"",
//               "invalid_route":"oracle-substitute"|"skip-agent"|"prefix",
//               "logit_temperature":1.0,"llm_temperature":0.2},
//    "metrics": {"wall_clock":false}}
struct TrainConfig {
  std::string graph = "builtin:grid:5";
  ScenarioOptions agents;
  std::vector<AgentSpec> explicit_agents;
  EnvConfig env;

  int epochs = 500;
  double gamma = 0.99;
  double epsilon = 0.2;
  double beta = 0.01;
  double lr = 3e-4;
  int q = 5;
  int update_epochs = 4;
  std::size_t hidden = 128;
  TrainMode mode = TrainMode::kLeed;
  double fixed_alpha = 0.5;
  std::uint64_t seed = 0;
  int checkpoint_every = 0;  // 0: final checkpoint only
  int threads = 1;
  AdvantageNorm agent_advantage_norm = AdvantageNorm::kStandardize;
  AdvantageNorm expert_advantage_norm = AdvantageNorm::kPositive;
  ExpertBaseline expert_baseline = ExpertBaseline::kAgent;

  ProviderKind provider = ProviderKind::kOracle;
  ProviderKind fallback = ProviderKind::kOracle;
  std::string mock_dir;
  InvalidRoutePolicy invalid_route = InvalidRoutePolicy::kOracleSubstitute;
  double logit_temperature = 1.0;
  double llm_temperature = 0.2;

  // When false the `seconds` metrics column is 0 so that metrics.csv is
  // reproducible byte for byte; timings then go to timing.csv only.
  bool wall_clock = false;

  // Provider actually used, after the mode has had its say.
  ProviderKind effective_provider() const;
  // Throws FormatError describing the first violated constraint.
  void validate() const;
};

std::string mode_name(TrainMode mode, double fixed_alpha);
TrainMode parse_mode(std::string_view text, double* fixed_alpha);
std::string provider_name(ProviderKind kind);
ProviderKind parse_provider(std::string_view text);

nlohmann::ordered_json config_to_json(const TrainConfig& config);
TrainConfig config_from_json(const nlohmann::json& doc);

// Sets doc[a][b]... from "a.b=value". `value` is taken as JSON when it
// parses as JSON, otherwise as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// 64-bit FNV-1a of the canonical (sorted, compact) JSON form.
std::uint64_t config_hash(const TrainConfig& config);
std::string hex64(std::uint64_t v);

}  // namespace xmix

#endif  // XMIX_TRAIN_CONFIG_HPP_
