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

#include "xmix/train/config.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <sstream>

#include "xmix/error.hpp"
#include "xmix/rng.hpp"

namespace xmix {
namespace {

const char* norm_name(AdvantageNorm n) {
  switch (n) {
    case AdvantageNorm::kStandardize:
      return "standardize";
    case AdvantageNorm::kScale:
      return "scale";
    case AdvantageNorm::kPositive:
      return "positive";
    case AdvantageNorm::kNone:
      return "none";
  }
  return "?";
}

AdvantageNorm parse_norm(const std::string& s) {
  if (s == "standardize") return AdvantageNorm::kStandardize;
  if (s == "scale") return AdvantageNorm::kScale;
  if (s == "none") return AdvantageNorm::kNone;
  if (s == "positive") return AdvantageNorm::kPositive;
  throw FormatError("unknown advantage normalization: " + s);
}

const char* invalid_name(InvalidRoutePolicy p) {
  switch (p) {
    case InvalidRoutePolicy::kOracleSubstitute:
      return "oracle-substitute";
    case InvalidRoutePolicy::kSkipAgent:
      return "skip-agent";
    case InvalidRoutePolicy::kPrefix:
      return "prefix";
  }
  return "?";
}

InvalidRoutePolicy parse_invalid(const std::string& s) {
  if (s == "oracle-substitute") return InvalidRoutePolicy::kOracleSubstitute;
  if (s == "skip-agent") return InvalidRoutePolicy::kSkipAgent;
  if (s == "prefix") return InvalidRoutePolicy::kPrefix;
  throw FormatError("unknown invalid_route policy: " + s);
}

template <typename T>
void read(const nlohmann::json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config key '") + key + "': " + e.what());
  }
}

// Rejects keys the schema does not know, so a misspelt override cannot be
// silently ignored.
void check_keys(const nlohmann::json& obj, const std::string& section,
                std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) {
    throw FormatError("config: '" + section + "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw FormatError("config: unknown key '" +
                        (section.empty() ? key : section + "." + key) + "'");
    }
  }
}

}  // namespace

ProviderKind TrainConfig::effective_provider() const {
  switch (mode) {
    case TrainMode::kIppo:
      return ProviderKind::kNone;
    case TrainMode::kLogitPpo:
      return ProviderKind::kLogit;
    default:
      return provider;
  }
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw FormatError("config: " + what); };
  if (epochs < 1) fail("train.epochs must be >= 1");
  if (q < 1) fail("train.q must be >= 1");
  if (update_epochs < 1) fail("train.update_epochs must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("train.gamma must lie in [0, 1]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("train.epsilon must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 1.0)) fail("train.beta must lie in (0, 1]");
  if (!(lr > 0.0)) fail("train.lr must be positive");
  if (hidden < 1) fail("train.hidden must be >= 1");
  if (threads < 1) fail("train.threads must be >= 1");
  if (mode == TrainMode::kFixedAlpha && !(fixed_alpha > 0.0 && fixed_alpha <= 1.0)) {
    fail("fixed alpha must lie in (0, 1]");
  }
  if (mode != TrainMode::kIppo && effective_provider() == ProviderKind::kNone) {
    fail("expert provider 'none' is only allowed with mode ippo");
  }
  if (effective_provider() == ProviderKind::kMock && mock_dir.empty()) {
    fail("expert.mock_dir is required for the mock provider");
  }
  if (!(logit_temperature > 0.0)) fail("expert.logit_temperature must be > 0");
  if (explicit_agents.empty() && agents.count < 1) fail("agents.count must be >= 1");
  if (env.step_limit < 1) fail("env.step_limit must be >= 1");
}

std::string mode_name(TrainMode mode, double fixed_alpha) {
  switch (mode) {
    case TrainMode::kLeed:
      return "leed";
    case TrainMode::kIppo:
      return "ippo";
    case TrainMode::kLogitPpo:
      return "logit-ppo";
    case TrainMode::kFixedAlpha: {
      std::ostringstream s;
      s << "fixed-alpha:" << fixed_alpha;
      return s.str();
    }
  }
  return "?";
}

TrainMode parse_mode(std::string_view text, double* fixed_alpha) {
  if (text == "leed") return TrainMode::kLeed;
  if (text == "ippo") return TrainMode::kIppo;
  if (text == "logit-ppo") return TrainMode::kLogitPpo;
  constexpr std::string_view kFixed = "fixed-alpha:";
  if (text.starts_with(kFixed)) {
    const std::string value(text.substr(kFixed.size()));
    try {
      std::size_t used = 0;
      const double a = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      if (fixed_alpha != nullptr) *fixed_alpha = a;
    } catch (const std::exception&) {
      throw FormatError("bad fixed alpha in mode: " + std::string(text));
    }
    return TrainMode::kFixedAlpha;
  }
  throw FormatError("unknown mode: " + std::string(text));
}

std::string provider_name(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kNone:
      return "none";
    case ProviderKind::kOracle:
      return "oracle";
    case ProviderKind::kLogit:
      return "logit";
    case ProviderKind::kLlm:
      return "llm";
    case ProviderKind::kMock:
      return "mock";
  }
  return "?";
}

ProviderKind parse_provider(std::string_view text) {
  if (text == "none") return ProviderKind::kNone;
  if (text == "oracle") return ProviderKind::kOracle;
  if (text == "logit") return ProviderKind::kLogit;
  if (text == "llm") return ProviderKind::kLlm;
  if (text == "mock") return ProviderKind::kMock;
  throw FormatError("unknown expert provider: " + std::string(text));
}

nlohmann::ordered_json config_to_json(const TrainConfig& c) {
  nlohmann::ordered_json doc;
  doc["graph"] = c.graph;
  auto& agents = doc["agents"];
  agents["count"] = c.agents.count;
  agents["min_hops"] = c.agents.min_hops;
  agents["depart_spread"] = c.agents.depart_spread;
  agents["explicit"] = nlohmann::ordered_json::array();
  for (const AgentSpec& s : c.explicit_agents) {
    agents["explicit"].push_back(
        {{"start", s.start}, {"dest", s.dest}, {"depart", s.depart_time}});
  }
  auto& env = doc["env"];
  env["step_limit"] = c.env.step_limit;
  env["time_penalty"] = c.env.time_penalty;
  env["shaping"] = c.env.shaping;
  env["arrival_bonus"] = c.env.arrival_bonus;
  env["congestion"] = c.env.congestion;
  env["congestion_penalty"] = c.env.congestion_penalty;
  auto& train = doc["train"];
  train["epochs"] = c.epochs;
  train["gamma"] = c.gamma;
  train["epsilon"] = c.epsilon;
  train["beta"] = c.beta;
  train["lr"] = c.lr;
  train["q"] = c.q;
  train["update_epochs"] = c.update_epochs;
  train["hidden"] = c.hidden;
  train["mode"] = mode_name(c.mode, c.fixed_alpha);
  train["seed"] = c.seed;
  train["checkpoint_every"] = c.checkpoint_every;
  train["threads"] = c.threads;
  train["agent_advantage_norm"] = norm_name(c.agent_advantage_norm);
  train["expert_advantage_norm"] = norm_name(c.expert_advantage_norm);
  train["expert_baseline"] =
      c.expert_baseline == ExpertBaseline::kAgent ? "agent" : "expert";
  auto& expert = doc["expert"];
  expert["provider"] = provider_name(c.provider);
  expert["fallback"] = provider_name(c.fallback);
  expert["mock_dir"] = c.mock_dir;
  expert["invalid_route"] = invalid_name(c.invalid_route);
  expert["logit_temperature"] = c.logit_temperature;
  expert["llm_temperature"] = c.llm_temperature;
  doc["metrics"]["wall_clock"] = c.wall_clock;
  return doc;
}

TrainConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw FormatError("config must be a JSON object");
  check_keys(doc, "", {"graph", "agents", "env", "train", "expert", "metrics"});
  const auto empty = nlohmann::json::object();
  auto section = [&](const char* name,
                     std::initializer_list<std::string_view> known)
      -> const nlohmann::json& {
    if (!doc.contains(name)) return empty;
    check_keys(doc[name], name, known);
    return doc[name];
  };
  TrainConfig c;
  read(doc, "graph", c.graph);
  const auto& agents =
      section("agents", {"count", "min_hops", "depart_spread", "explicit"});
  read(agents, "count", c.agents.count);
  read(agents, "min_hops", c.agents.min_hops);
  read(agents, "depart_spread", c.agents.depart_spread);
  if (agents.contains("explicit")) {
    int id = 0;
    for (const auto& a : agents["explicit"]) {
      AgentSpec s;
      s.agent_id = id++;
      try {
        s.start = a.at("start").get<int>();
        s.dest = a.at("dest").get<int>();
        s.depart_time = a.value("depart", 0);
      } catch (const nlohmann::json::exception& e) {
        throw FormatError("config: agents.explicit entry " +
                          std::to_string(s.agent_id) + ": " + e.what());
      }
      c.explicit_agents.push_back(s);
    }
  }
  const auto& env = section("env", {"step_limit", "time_penalty", "shaping",
                                    "arrival_bonus", "congestion",
                                    "congestion_penalty"});
  read(env, "step_limit", c.env.step_limit);
  read(env, "time_penalty", c.env.time_penalty);
  read(env, "shaping", c.env.shaping);
  read(env, "arrival_bonus", c.env.arrival_bonus);
  read(env, "congestion", c.env.congestion);
  read(env, "congestion_penalty", c.env.congestion_penalty);
  const auto& train =
      section("train", {"epochs", "gamma", "epsilon", "beta", "lr", "q",
                        "update_epochs", "hidden", "mode", "seed",
                        "checkpoint_every", "threads", "agent_advantage_norm",
                        "expert_advantage_norm", "expert_baseline"});
  read(train, "epochs", c.epochs);
  read(train, "gamma", c.gamma);
  read(train, "epsilon", c.epsilon);
  read(train, "beta", c.beta);
  read(train, "lr", c.lr);
  read(train, "q", c.q);
  read(train, "update_epochs", c.update_epochs);
  read(train, "hidden", c.hidden);
  if (train.contains("mode")) {
    c.mode = parse_mode(train["mode"].get<std::string>(), &c.fixed_alpha);
  }
  read(train, "seed", c.seed);
  read(train, "checkpoint_every", c.checkpoint_every);
  read(train, "threads", c.threads);
  if (train.contains("agent_advantage_norm")) {
    c.agent_advantage_norm = parse_norm(train["agent_advantage_norm"].get<std::string>());
  }
  if (train.contains("expert_advantage_norm")) {
    c.expert_advantage_norm = parse_norm(train["expert_advantage_norm"].get<std::string>());
  }
  if (train.contains("expert_baseline")) {
    const auto b = train["expert_baseline"].get<std::string>();
    if (b == "agent") {
      c.expert_baseline = ExpertBaseline::kAgent;
    } else if (b == "expert") {
      c.expert_baseline = ExpertBaseline::kExpert;
    } else {
      throw FormatError("unknown expert baseline: " + b);
    }
  }
  const auto& expert =
      section("expert", {"provider", "fallback", "mock_dir", "invalid_route",
                         "logit_temperature", "llm_temperature"});
  if (expert.contains("provider")) {
    c.provider = parse_provider(expert["provider"].get<std::string>());
  }
  if (expert.contains("fallback")) {
    c.fallback = parse_provider(expert["fallback"].get<std::string>());
  }
  read(expert, "mock_dir", c.mock_dir);
  if (expert.contains("invalid_route")) {
    c.invalid_route = parse_invalid(expert["invalid_route"].get<std::string>());
  }
  read(expert, "logit_temperature", c.logit_temperature);
  read(expert, "llm_temperature", c.llm_temperature);
  read(section("metrics", {"wall_clock"}), "wall_clock", c.wall_clock);
  return c;
}

void apply_override(nlohmann::json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw FormatError("override must look like key.path=value: " +
                      std::string(assignment));
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw FormatError("empty key in override: " + path);
    if (!node->is_object()) *node = nlohmann::json::object();
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::uint64_t config_hash(const TrainConfig& config) {
  const nlohmann::json canonical = config_to_json(config);  // sorted keys
  return fnv1a(canonical.dump());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace xmix
