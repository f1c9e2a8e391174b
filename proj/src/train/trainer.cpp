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

#include "xmix/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "xmix/dtw/dtw.hpp"
#include "xmix/env/fixtures.hpp"
#include "xmix/error.hpp"
#include "xmix/nn/checkpoint.hpp"
#include "xmix/ppo/losses.hpp"
#include "xmix/simd/kernels.hpp"

namespace xmix {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> normalize_advantages(const std::vector<double>& raw,
                                         AdvantageNorm norm) {
  switch (norm) {
    case AdvantageNorm::kStandardize:
      return standardize(raw);
    case AdvantageNorm::kScale: {
      // Divide by the root mean square; keeps the sign of every entry.
      double sq = 0.0;
      for (double a : raw) sq += a * a;
      const double rms = raw.empty() ? 0.0 : std::sqrt(sq / raw.size());
      std::vector<double> out(raw);
      for (double& a : out) a /= rms + 1e-8;
      return out;
    }
    case AdvantageNorm::kNone:
      return raw;
    case AdvantageNorm::kPositive: {
      std::vector<double> out(raw);
      for (double& a : out) a = std::max(a, 0.0);
      return out;
    }
  }
  return raw;
}

// Steps `net` on the mean squared error against fixed `targets`. Returns the
// loss at the parameters the call started from.
double fit_value(MlpParams& net, AdamState& opt, const Trajectory& traj,
                 const std::vector<double>& targets, const TrainConfig& config) {
  const std::size_t n = traj.size();
  std::vector<ForwardCache> caches(n);
  double first_loss = 0.0;
  for (int u = 0; u < config.update_epochs; ++u) {
    MlpParams grads(net.dims());
    double loss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = value_forward(net, traj.transitions[t].obs, caches[t]);
      const double diff = v - targets[t];
      loss += diff * diff;
      const double upstream = 2.0 * diff / static_cast<double>(n);
      mlp_backward(net, caches[t], std::span<const double>(&upstream, 1), grads);
    }
    loss /= static_cast<double>(n);
    if (!std::isfinite(loss)) throw NumericError("value loss is not finite");
    if (u == 0) first_loss = loss;
    adam_step(net, grads, opt, config.lr);
  }
  return first_loss;
}

struct PolicyBatch {
  const Trajectory* traj = nullptr;
  std::vector<double> adv;
  std::vector<double> logp_old;
  double weight = 0.0;          // alpha or 1 - alpha
  bool with_entropy = false;    // the entropy bonus is taken over agent data
};

double fit_policy(AgentLearner& learner, std::vector<PolicyBatch>& batches,
                  const TrainConfig& config, double* mean_entropy) {
  MlpParams& net = learner.policy;
  double first_objective = 0.0;
  for (int u = 0; u < config.update_epochs; ++u) {
    MlpParams grads(net.dims());
    double objective = 0.0;
    for (PolicyBatch& b : batches) {
      const std::size_t n = b.traj->size();
      std::vector<ForwardCache> caches(n);
      std::vector<PolicyOutput> outs(n);
      std::vector<double> logp_new(n);
      double entropy_sum = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const Transition& tr = b.traj->transitions[t];
        outs[t] = policy_forward(net, tr.obs, caches[t]);
        logp_new[t] = outs[t].log_probs[tr.action];
        entropy_sum += outs[t].entropy;
      }
      if (u == 0) b.logp_old = logp_new;  // pi_old: parameters before this update
      const std::vector<double> g =
          clipped_surrogate_grad(logp_new, b.logp_old, b.adv, config.epsilon);
      const double surrogate =
          clipped_surrogate(logp_new, b.logp_old, b.adv, config.epsilon);
      const double inv_n = 1.0 / static_cast<double>(n);
      objective += b.weight * surrogate;
      if (b.with_entropy) {
        objective += config.beta * entropy_sum * inv_n;
        if (u == 0 && mean_entropy != nullptr) *mean_entropy = entropy_sum * inv_n;
      }
      std::vector<double> upstream(net.out_dim());
      for (std::size_t t = 0; t < n; ++t) {
        std::fill(upstream.begin(), upstream.end(), 0.0);
        if (b.weight != 0.0 && g[t] != 0.0) {
          const auto dlogp = log_prob_logit_grad(outs[t], b.traj->transitions[t].action);
          for (std::size_t j = 0; j < upstream.size(); ++j) {
            upstream[j] -= b.weight * g[t] * dlogp[j];
          }
        }
        if (b.with_entropy) {
          const auto dh = entropy_logit_grad(outs[t]);
          for (std::size_t j = 0; j < upstream.size(); ++j) {
            upstream[j] -= config.beta * inv_n * dh[j];
          }
        }
        mlp_backward(net, caches[t], upstream, grads);
      }
    }
    if (!std::isfinite(objective)) throw NumericError("policy objective is not finite");
    if (u == 0) first_objective = objective;
    adam_step(net, grads, learner.policy_opt, config.lr);
  }
  return first_objective;
}

int sample_action(const PolicyOutput& out, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int last_valid = -1;
  for (std::size_t j = 0; j < out.probs.size(); ++j) {
    if (out.probs[j] <= 0.0) continue;
    last_valid = static_cast<int>(j);
    acc += out.probs[j];
    if (u < acc) return last_valid;
  }
  return last_valid;
}

int greedy_action(const PolicyOutput& out) {
  int best = -1;
  for (std::size_t j = 0; j < out.probs.size(); ++j) {
    if (out.probs[j] <= 0.0 && !(out.log_probs[j] > -INFINITY)) continue;
    if (best < 0 || out.logits[j] > out.logits[best]) best = static_cast<int>(j);
  }
  return best;
}

template <typename ChooseFn>
std::vector<Trajectory> play_episode(RoadEnv& env, std::uint64_t seed,
                                     ChooseFn&& choose) {
  const std::size_t n = env.agent_count();
  std::vector<Observation> obs = env.reset(seed);
  std::vector<Trajectory> trajs(n);
  for (std::size_t i = 0; i < n; ++i) {
    trajs[i].source = Source::kAgent;
    trajs[i].agent_id = static_cast<int>(i);
    trajs[i].junction_path.push_back(env.specs()[i].start);
  }
  std::vector<int> joint(n, kNoAction);
  std::vector<double> logp(n, 0.0);
  while (!env.done()) {
    for (std::size_t i = 0; i < n; ++i) {
      joint[i] = kNoAction;
      if (env.state().done[i] || !env.spawned(static_cast<int>(i))) continue;
      joint[i] = choose(i, obs[i], &logp[i]);
    }
    StepResult res = env.step(joint);
    for (std::size_t i = 0; i < n; ++i) {
      if (!res.acted[i]) continue;
      Transition t;
      t.obs = std::move(obs[i]);
      t.action = joint[i];
      t.reward = res.rewards[i];
      t.log_prob_behavior = logp[i];
      trajs[i].transitions.push_back(std::move(t));
      trajs[i].junction_path.push_back(env.state().position[i]);
    }
    obs = std::move(res.observations);
  }
  for (std::size_t i = 0; i < n; ++i) {
    trajs[i].terminal_obs = obs[i];
    trajs[i].arrived = env.state().arrived[i] != 0;
  }
  return trajs;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string agent_file(int agent, const char* net) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "agent_%03d_%s.json", agent, net);
  return buf;
}

std::string fmt(double v) {
  return std::isnan(v) ? std::string("nan") : format_number(v);
}

}  // namespace

AgentLearner make_learner(std::size_t obs_dim, std::size_t actions,
                          std::size_t hidden, std::uint64_t master_seed,
                          int agent_id) {
  AgentLearner l;
  Rng policy_rng(derive_seed(master_seed, "init.policy", agent_id));
  Rng va_rng(derive_seed(master_seed, "init.value_a", agent_id));
  Rng ve_rng(derive_seed(master_seed, "init.value_e", agent_id));
  l.policy = init_mlp(policy_dims(obs_dim, actions, hidden), policy_rng, true);
  l.value_agent = init_mlp(value_dims(obs_dim, hidden), va_rng, false);
  l.value_expert = init_mlp(value_dims(obs_dim, hidden), ve_rng, false);
  l.policy_opt = AdamState::for_params(l.policy);
  l.value_agent_opt = AdamState::for_params(l.value_agent);
  l.value_expert_opt = AdamState::for_params(l.value_expert);
  return l;
}

UpdateStats update_agent(AgentLearner& learner, const Trajectory& tau_a,
                         const Trajectory* tau_e, int k, int total_epochs,
                         const TrainConfig& config, const RoadGraph& graph) {
  UpdateStats stats;
  bool use_expert = false;
#ifndef XMIX_NO_EXPERT
  use_expert = config.mode != TrainMode::kIppo && tau_e != nullptr && !tau_e->empty();
#else
  (void)tau_e;
  (void)k;
  (void)total_epochs;
  (void)graph;
#endif
  stats.used_expert = use_expert;

  std::vector<PolicyBatch> batches;
  if (!tau_a.empty()) {
    const ReturnsAndAdvantages ra =
        returns_and_advantages(tau_a, learner.value_agent, config.gamma);
    stats.value_loss_agent = fit_value(learner.value_agent, learner.value_agent_opt,
                                       tau_a, ra.returns, config);
    PolicyBatch b;
    b.traj = &tau_a;
    b.adv = normalize_advantages(ra.advantages, config.agent_advantage_norm);
    b.with_entropy = true;
    batches.push_back(std::move(b));
  }

  double alpha = 1.0;
#ifndef XMIX_NO_EXPERT
  if (use_expert) {
    if (config.mode == TrainMode::kFixedAlpha) {
      alpha = config.fixed_alpha;
      learner.dtw = dtw_distance(traj_to_feature_seq(tau_a, graph),
                                 traj_to_feature_seq(*tau_e, graph));
    } else {
      if (learner.alpha_stale) {
        learner.dtw = dtw_distance(traj_to_feature_seq(tau_a, graph),
                                   traj_to_feature_seq(*tau_e, graph));
        learner.alpha = alpha_weight(k, total_epochs, learner.dtw);
        learner.alpha_stale = false;
      }
      alpha = learner.alpha;
    }
    const ReturnsAndAdvantages re =
        returns_and_advantages(*tau_e, learner.value_expert, config.gamma);
    stats.value_loss_expert = fit_value(learner.value_expert, learner.value_expert_opt,
                                        *tau_e, re.returns, config);
    PolicyBatch b;
    b.traj = tau_e;
    // With the agent baseline the expert term keeps pulling wherever the
    // expert still beats the agent's own value estimate, even after V^e has
    // fitted the demonstrations.
    const std::vector<double> raw_e =
        config.expert_baseline == ExpertBaseline::kAgent
            ? returns_and_advantages(*tau_e, learner.value_agent, config.gamma).advantages
            : re.advantages;
    b.adv = normalize_advantages(raw_e, config.expert_advantage_norm);
    b.weight = 1.0 - alpha;
    batches.push_back(std::move(b));
  }
#endif
  if (!batches.empty() && batches.front().traj == &tau_a) batches.front().weight = alpha;
  learner.alpha = alpha;
  stats.alpha = alpha;
  stats.dtw = use_expert ? learner.dtw : 0.0;

  if (!batches.empty()) {
    stats.policy_objective = fit_policy(learner, batches, config, &stats.mean_entropy);
  }
  return stats;
}

std::vector<Trajectory> rollout(std::span<const AgentLearner> learners,
                                RoadEnv& env, std::span<Rng> agent_rngs,
                                std::uint64_t seed) {
  if (learners.size() != env.agent_count() || agent_rngs.size() != learners.size()) {
    throw PreconditionError("rollout: one learner and one RNG per agent required");
  }
  ForwardCache cache;
  return play_episode(env, seed, [&](std::size_t i, const Observation& obs, double* logp) {
    const PolicyOutput out = policy_forward(learners[i].policy, obs, cache);
    const int a = sample_action(out, agent_rngs[i]);
    *logp = out.log_probs[a];
    return a;
  });
}

std::vector<double> greedy_episode(std::span<const MlpParams> policies,
                                   RoadEnv& env, std::uint64_t seed) {
  if (policies.size() != env.agent_count()) {
    throw PreconditionError("greedy_episode: one policy per agent required");
  }
  ForwardCache cache;
  const auto trajs =
      play_episode(env, seed, [&](std::size_t i, const Observation& obs, double* logp) {
        const PolicyOutput out = policy_forward(policies[i], obs, cache);
        const int a = greedy_action(out);
        *logp = out.log_probs[a];
        return a;
      });
  std::vector<double> rewards;
  for (const Trajectory& t : trajs) rewards.push_back(t.total_reward());
  return rewards;
}

std::string metrics_csv_header() {
  return "epoch,mean_reward_a,mean_reward_e,alpha_mean,dtw_mean,validity_rate,"
         "loss_policy,loss_value_a,loss_value_e,seconds";
}

std::string metrics_csv_row(const EpochMetrics& m) {
  std::ostringstream s;
  s << m.epoch << ',' << fmt(m.mean_reward_a) << ',' << fmt(m.mean_reward_e) << ','
    << fmt(m.alpha_mean) << ',' << fmt(m.dtw_mean) << ',' << fmt(m.validity_rate)
    << ',' << fmt(m.loss_policy) << ',' << fmt(m.loss_value_a) << ','
    << fmt(m.loss_value_e) << ',' << fmt(m.seconds);
  return s.str();
}

Scenario make_scenario(const TrainConfig& config,
                       const std::filesystem::path& base_dir) {
  Scenario sc;
  const std::string& g = config.graph;
  if (g.starts_with("builtin:grid:")) {
    // builtin:grid:N or builtin:grid:N:SPACING
    const std::string rest = g.substr(13);
    const auto colon = rest.find(':');
    const double spacing = colon == std::string::npos
                               ? kGridFixtureSpacing
                               : std::stod(rest.substr(colon + 1));
    sc.graph = make_grid(std::stoi(rest.substr(0, colon)), spacing);
  } else if (g == "builtin:grid") {
    sc.graph = make_grid(5, kGridFixtureSpacing);
  } else if (g == "builtin:hilly") {
    sc.graph = make_hilly();
  } else if (g == "builtin:line") {
    sc.graph = make_line({1.0, 1.0});
  } else {
    std::filesystem::path path(g);
    if (path.is_relative() && !std::filesystem::exists(path) && !base_dir.empty() &&
        std::filesystem::exists(base_dir / path)) {
      path = base_dir / path;
    }
    if (!std::filesystem::exists(path)) {
      throw NotFoundError("graph file not found: " + g);
    }
    sc.graph = load_graph_file(path.string());
  }
  if (!config.explicit_agents.empty()) {
    sc.specs = config.explicit_agents;
  } else {
    sc.specs = generate_agents(sc.graph, config.agents,
                               derive_seed(config.seed, "scenario"));
  }
  validate_specs(sc.graph, sc.specs);
  return sc;
}

namespace {

std::unique_ptr<ExpertProvider> make_single(ProviderKind kind,
                                            const TrainConfig& config) {
  switch (kind) {
    case ProviderKind::kNone:
      return nullptr;
    case ProviderKind::kOracle:
      return std::make_unique<OracleProvider>();
    case ProviderKind::kLogit:
      return std::make_unique<LogitProvider>(config.logit_temperature,
                                             derive_seed(config.seed, "logit"));
    case ProviderKind::kLlm: {
      EndpointConfig ep = EndpointConfig::from_env();
      ep.temperature = config.llm_temperature;
      return std::make_unique<LlmProvider>(std::move(ep));
    }
    case ProviderKind::kMock:
      return std::make_unique<MockProvider>(config.mock_dir);
  }
  return nullptr;
}

}  // namespace

std::unique_ptr<ExpertProvider> make_provider(const TrainConfig& config) {
  const ProviderKind kind = config.effective_provider();
  auto primary = make_single(kind, config);
  const bool textual = kind == ProviderKind::kLlm || kind == ProviderKind::kMock;
  if (primary && textual && config.fallback != ProviderKind::kNone) {
    if (config.fallback == ProviderKind::kLlm || config.fallback == ProviderKind::kMock) {
      throw FormatError("config: fallback provider must be oracle, logit or none");
    }
    return std::make_unique<FallbackProvider>(std::move(primary),
                                              make_single(config.fallback, config));
  }
  return primary;
}

Trainer::Trainer(TrainConfig config, Scenario scenario,
                 std::unique_ptr<ExpertProvider> provider)
    : config_(std::move(config)),
      scenario_(std::move(scenario)),
      provider_(std::move(provider)),
      env_(scenario_.graph, scenario_.specs, config_.env),
      validity_rate_(kNaN) {
  config_.validate();
  if (!provider_ && config_.effective_provider() != ProviderKind::kNone) {
    provider_ = make_provider(config_);
  }
  if (config_.effective_provider() == ProviderKind::kNone) provider_.reset();
  const std::size_t m = scenario_.graph.max_out_degree();
  if (m == 0) throw PreconditionError("graph has no edges");
  for (std::size_t i = 0; i < scenario_.specs.size(); ++i) {
    learners_.push_back(make_learner(2 + 2 * m, m, config_.hidden, config_.seed,
                                     static_cast<int>(i)));
    agent_rngs_.emplace_back(derive_seed(config_.seed, "rollout", i));
  }
  prompt_ = make_prompt_state(scenario_.graph, scenario_.specs);
}

bool Trainer::regeneration_epoch(int k) const {
  return k == 1 || k % config_.q == 0;
}

std::vector<MlpParams> Trainer::policies() const {
  std::vector<MlpParams> out;
  out.reserve(learners_.size());
  for (const AgentLearner& l : learners_) out.push_back(l.policy);
  return out;
}

EpochMetrics Trainer::run_epoch(int k) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = learners_.size();
  const RoadGraph& graph = scenario_.graph;
  EpochMetrics m;
  m.epoch = k;

  std::vector<Trajectory> tau_a =
      rollout(learners_, env_, agent_rngs_, derive_seed(config_.seed, "episode", k));

#ifndef XMIX_NO_EXPERT
  if (provider_ && regeneration_epoch(k)) {
    DemoBatch batch = provider_->generate(prompt_, graph, scenario_.specs);
    DemoExecution exec = execute_demos(graph, scenario_.specs, config_.env, batch.set,
                                       policies(), config_.invalid_route,
                                       derive_seed(config_.seed, "demo", k));
    std::vector<std::uint8_t> valid(n, 0);
    std::vector<AgentFeedback> feedback;
    for (std::size_t i = 0; i < n; ++i) {
      valid[i] = (i >= batch.issues.size() || !batch.issues[i]) && exec.valid[i];
      AgentLearner& l = learners_[i];
      l.last_expert = exec.trajectories[i]
                          ? std::make_shared<const Trajectory>(std::move(*exec.trajectories[i]))
                          : nullptr;
      l.alpha_stale = true;
      AgentFeedback f;
      f.agent_id = static_cast<int>(i);
      f.explored_path = tau_a[i].junction_path;
      f.explored_reward = tau_a[i].total_reward();
      f.demonstration_valid = valid[i] != 0;
      if (l.last_expert) {
        f.demonstrated_path = l.last_expert->junction_path;
        f.demonstrated_reward = l.last_expert->total_reward();
        f.dtw = dtw_distance(traj_to_feature_seq(tau_a[i], graph),
                             traj_to_feature_seq(*l.last_expert, graph));
      }
      feedback.push_back(std::move(f));
    }
    validity_rate_ = validity_rate(valid);
    prompt_ = refine_prompt(std::move(prompt_), k, std::move(feedback));
    ++regenerations_;
    m.regenerated = true;
    m.tokens = batch.tokens;
  }
#endif

  std::vector<UpdateStats> stats(n);
  auto update_one = [&](std::size_t i) {
    AgentLearner& l = learners_[i];
    try {
      stats[i] = update_agent(l, tau_a[i], l.last_expert.get(), k, config_.epochs,
                              config_, graph);
    } catch (const NumericError& e) {
      throw NumericError("epoch " + std::to_string(k) + ", agent " +
                         std::to_string(i) + ": " + e.what());
    }
  };
  if (config_.threads > 1 && n > 1) {
    const std::size_t workers = std::min<std::size_t>(config_.threads, n);
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < n; i += workers) update_one(i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) update_one(i);
  }

  std::vector<double> losses_p, losses_va, losses_ve;
  for (std::size_t i = 0; i < n; ++i) {
    AgentLearner& l = learners_[i];
    m.reward_a.push_back(tau_a[i].total_reward());
    m.alpha.push_back(stats[i].alpha);
    m.dtw.push_back(stats[i].used_expert ? stats[i].dtw : kNaN);
    m.reward_e.push_back(l.last_expert ? l.last_expert->total_reward() : kNaN);
    losses_p.push_back(-stats[i].policy_objective);
    losses_va.push_back(stats[i].value_loss_agent);
    if (stats[i].used_expert) losses_ve.push_back(stats[i].value_loss_expert);
    l.last_agent = std::move(tau_a[i]);
  }
  auto mean_finite = [](const std::vector<double>& v) {
    std::vector<double> f;
    for (double x : v) {
      if (std::isfinite(x)) f.push_back(x);
    }
    return mean_of(f);
  };
  m.mean_reward_a = mean_of(m.reward_a);
  m.mean_reward_e = mean_finite(m.reward_e);
  m.alpha_mean = mean_of(m.alpha);
  m.dtw_mean = mean_finite(m.dtw);
  m.validity_rate = validity_rate_;
  m.loss_policy = mean_of(losses_p);
  m.loss_value_a = mean_of(losses_va);
  m.loss_value_e = mean_of(losses_ve);
  m.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (config_.wall_clock) m.seconds = m.elapsed;
  return m;
}

void Trainer::run(const std::function<void(const EpochMetrics&)>& on_epoch) {
  for (int k = 1; k <= config_.epochs; ++k) {
    EpochMetrics m = run_epoch(k);
    if (on_epoch) on_epoch(m);
  }
}

void Trainer::save_checkpoint(const std::filesystem::path& dir, int epoch) const {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < learners_.size(); ++i) {
    const int id = static_cast<int>(i);
    save_params(learners_[i].policy, (dir / agent_file(id, "policy")).string());
    save_params(learners_[i].value_agent, (dir / agent_file(id, "value_a")).string());
    save_params(learners_[i].value_expert, (dir / agent_file(id, "value_e")).string());
  }
  nlohmann::ordered_json manifest;
  manifest["format"] = "xmix-checkpoint";
  manifest["version"] = 1;
  manifest["config_hash"] = hex64(config_hash(config_));
  manifest["epoch"] = epoch;
  manifest["agents"] = learners_.size();
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(1) << '\n';
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw NotFoundError("checkpoint manifest missing in " + dir.string());
  const auto manifest = nlohmann::json::parse(in, nullptr, false);
  if (manifest.is_discarded() || manifest.value("format", "") != "xmix-checkpoint") {
    throw FormatError("bad checkpoint manifest in " + dir.string());
  }
  LoadedCheckpoint ck;
  ck.config_hash = std::stoull(manifest.at("config_hash").get<std::string>(), nullptr, 16);
  ck.epoch = manifest.at("epoch").get<int>();
  const int agents = manifest.at("agents").get<int>();
  for (int i = 0; i < agents; ++i) {
    ck.policies.push_back(load_params((dir / agent_file(i, "policy")).string()));
  }
  return ck;
}

EvalStats evaluate_policies(std::span<const MlpParams> policies,
                            const Scenario& scenario, const EnvConfig& env_config,
                            int episodes, std::uint64_t seed) {
  if (policies.size() != scenario.specs.size()) {
    throw PreconditionError("evaluate: checkpoint has " + std::to_string(policies.size()) +
                            " agents, scenario has " +
                            std::to_string(scenario.specs.size()));
  }
  const std::size_t m = scenario.graph.max_out_degree();
  for (const MlpParams& p : policies) {
    if (p.in_dim() != 2 + 2 * m || p.out_dim() != m) {
      throw PreconditionError("evaluate: policy shape does not match the graph");
    }
  }
  EvalStats stats;
  RoadEnv env(scenario.graph, scenario.specs, env_config);
  for (int e = 0; e < episodes; ++e) {
    const auto rewards = greedy_episode(policies, env, derive_seed(seed, "eval", e));
    stats.episode_rewards.push_back(mean_of(rewards));
  }
  stats.mean = mean_of(stats.episode_rewards);
  double var = 0.0;
  for (double r : stats.episode_rewards) var += (r - stats.mean) * (r - stats.mean);
  const auto count = stats.episode_rewards.size();
  stats.stddev = count > 1 ? std::sqrt(var / static_cast<double>(count - 1)) : 0.0;
  return stats;
}

double oracle_return(const Scenario& scenario, const EnvConfig& env) {
  const DemoExecution exec =
      execute_demos(scenario.graph, scenario.specs, env,
                    oracle_expert(scenario.graph, scenario.specs), {},
                    InvalidRoutePolicy::kOracleSubstitute, 0);
  std::vector<double> rewards;
  for (const auto& t : exec.trajectories) rewards.push_back(t->total_reward());
  return mean_of(rewards);
}

Trainer::DemoQuality Trainer::assess_demos(ExpertProvider& provider,
                                           std::uint64_t seed) {
  const RoadGraph& graph = scenario_.graph;
  const std::size_t n = learners_.size();
  DemoQuality q;
  DemoBatch batch = provider.generate(prompt_, graph, scenario_.specs);
  q.tokens = batch.tokens;
  const DemoExecution exec =
      execute_demos(graph, scenario_.specs, config_.env, batch.set, policies(),
                    InvalidRoutePolicy::kPrefix, derive_seed(seed, "assess.demo"));
  std::vector<Rng> rngs;
  for (std::size_t i = 0; i < n; ++i) rngs.emplace_back(derive_seed(seed, "assess.rollout", i));
  RoadEnv env(graph, scenario_.specs, config_.env);
  const auto tau_a = rollout(learners_, env, rngs, derive_seed(seed, "assess.episode"));
  for (std::size_t i = 0; i < n; ++i) {
    q.valid.push_back((i >= batch.issues.size() || !batch.issues[i]) && exec.valid[i]);
    const Trajectory& te = *exec.trajectories[i];
    q.reward.push_back(te.total_reward());
    q.dtw.push_back(dtw_distance(traj_to_feature_seq(tau_a[i], graph),
                                 traj_to_feature_seq(te, graph)));
  }
  return q;
}

}  // namespace xmix
