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

#include <vector>

#include "xmix/demo/experts.hpp"
#include "xmix/demo/instructions.hpp"
#include "xmix/env/fixtures.hpp"
#include "xmix/error.hpp"
#include "xmix/nn/mlp.hpp"

namespace xmix {
namespace {

// 0 -> 1 -> 3 and 0 -> 2 -> 3; the lower branch costs `lower`.
RoadGraph diamond(double lower) {
  return RoadGraph({{0, 0}, {1, 1}, {1, -1}, {2, 0}},
                   {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, lower}, {2, 3, 1.0}});
}

TEST(OracleExpert, ShortestRoutesValidate) {
  const RoadGraph line = make_line({1.0, 1.0});
  const std::vector<AgentSpec> one{{0, 0, 2, 0}};
  EXPECT_EQ(oracle_expert(line, one).per_agent[0].waypoints(),
            (std::vector<JunctionId>{0, 1, 2}));

  const RoadGraph pair = make_line({4.0});
  const std::vector<AgentSpec> adj{{0, 0, 1, 0}};
  EXPECT_EQ(oracle_expert(pair, adj).per_agent[0].steps.size(), 1u);

  const RoadGraph g = make_grid(5, kGridFixtureSpacing);
  const auto specs = generate_agents(g, {20, 1, 0}, 4);
  const ExecutableSet set = oracle_expert(g, specs);
  std::vector<std::uint8_t> valid;
  for (const AgentSpec& s : specs) {
    const auto w = set.per_agent[s.agent_id].waypoints();
    valid.push_back(validate_route(g, s, w));
    EXPECT_NEAR((w.size() - 1) * kGridFixtureSpacing, g.distance(s.start, s.dest), 1e-9);
  }
  EXPECT_EQ(validity_rate(valid), 100.0);
  const std::vector<AgentSpec> corner{{0, 0, 24, 0}};
  EXPECT_EQ(oracle_expert(g, corner).per_agent[0].steps.size(), 8u);
}

TEST(LogitExpert, EqualCostRoutesSplitEvenly) {
  const RoadGraph g = diamond(1.0);
  const std::vector<AgentSpec> specs{{0, 0, 3, 0}};
  Rng rng(10);
  int upper = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto w = logit_expert(g, specs, 0.7, rng).per_agent[0].waypoints();
    upper += w[1] == 1;
  }
  // Four standard deviations of a fair binomial proportion.
  EXPECT_NEAR(upper / static_cast<double>(draws), 0.5, 0.02);
}

TEST(LogitExpert, LowTemperaturePicksShortest) {
  const RoadGraph g = diamond(1.5);
  const std::vector<AgentSpec> specs{{0, 0, 3, 0}};
  Rng rng(11);
  int shortest = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    shortest += logit_expert(g, specs, 0.01, rng).per_agent[0].waypoints()[1] == 1;
  }
  EXPECT_GT(shortest / static_cast<double>(draws), 0.99);

  const RoadGraph line = make_line({1.0, 2.0, 3.0});
  const std::vector<AgentSpec> only{{0, 0, 3, 0}};
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(logit_expert(line, only, 5.0, rng).per_agent[0].waypoints(),
              (std::vector<JunctionId>{0, 1, 2, 3}));
  }
  EXPECT_THROW(logit_expert(line, only, 0.0, rng), PreconditionError);
}

TEST(ExecuteDemos, OracleRoutesOnLine) {
  const RoadGraph g = make_line({1.0, 1.0});
  const std::vector<AgentSpec> specs{{0, 0, 2, 0}};
  const DemoExecution d = execute_demos(g, specs, EnvConfig{}, oracle_expert(g, specs),
                                        {}, InvalidRoutePolicy::kOracleSubstitute, 0);
  ASSERT_TRUE(d.trajectories[0]);
  const Trajectory& t = *d.trajectories[0];
  EXPECT_EQ(t.source, Source::kExpert);
  EXPECT_TRUE(t.arrived);
  EXPECT_EQ(t.junction_path, (std::vector<JunctionId>{0, 1, 2}));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t.transitions[0].reward, 0.9, 1e-12);
  EXPECT_NEAR(t.transitions[1].reward, 10.9, 1e-12);
  EXPECT_TRUE(d.valid[0]);
  EXPECT_FALSE(d.substituted[0]);
}

TEST(ExecuteDemos, InvalidRoutePolicies) {
  const RoadGraph g = make_grid(4);
  const std::vector<AgentSpec> specs{{0, 0, 15, 0}, {1, 3, 12, 0}};
  // Agent 1's route jumps 3 -> 12 with no edge; its first hop is fine.
  const ExecutableSet set =
      routes_to_set({{0, 1, 2, 3, 7, 11, 15}, {3, 2, 12}});

  const DemoExecution sub =
      execute_demos(g, specs, EnvConfig{}, set, {}, InvalidRoutePolicy::kOracleSubstitute, 1);
  EXPECT_EQ(sub.valid, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(sub.substituted, (std::vector<std::uint8_t>{0, 1}));
  ASSERT_TRUE(sub.trajectories[1]);
  EXPECT_TRUE(sub.trajectories[1]->arrived);
  EXPECT_EQ(sub.trajectories[1]->junction_path,
            shortest_path(g, 3, 12)->junctions);

  const DemoExecution skip =
      execute_demos(g, specs, EnvConfig{}, set, {}, InvalidRoutePolicy::kSkipAgent, 1);
  EXPECT_TRUE(skip.trajectories[0]);
  EXPECT_FALSE(skip.trajectories[1]);

  const DemoExecution prefix =
      execute_demos(g, specs, EnvConfig{}, set, {}, InvalidRoutePolicy::kPrefix, 1);
  ASSERT_TRUE(prefix.trajectories[1]);
  EXPECT_EQ(prefix.trajectories[1]->junction_path, (std::vector<JunctionId>{3, 2}));
  EXPECT_FALSE(prefix.trajectories[1]->arrived);
}

TEST(ExecuteDemos, DeterministicWithPolicyLogProbs) {
  const RoadGraph g = make_hilly();
  const auto specs = generate_agents(g, {4, 2, 2}, 6);
  std::vector<MlpParams> policies;
  Rng rng(3);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    policies.push_back(init_mlp(policy_dims(2 + 2 * g.max_out_degree(),
                                            g.max_out_degree(), 16),
                                rng, false));
  }
  Rng lr1(9), lr2(9);
  const ExecutableSet s1 = logit_expert(g, specs, 1.0, lr1);
  const ExecutableSet s2 = logit_expert(g, specs, 1.0, lr2);
  ASSERT_EQ(s1, s2);
  const DemoExecution a = execute_demos(g, specs, EnvConfig{}, s1, policies,
                                        InvalidRoutePolicy::kOracleSubstitute, 5);
  const DemoExecution b = execute_demos(g, specs, EnvConfig{}, s2, policies,
                                        InvalidRoutePolicy::kOracleSubstitute, 5);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ASSERT_TRUE(a.trajectories[i] && b.trajectories[i]);
    EXPECT_EQ(a.trajectories[i]->junction_path, b.trajectories[i]->junction_path);
    ASSERT_EQ(a.trajectories[i]->size(), b.trajectories[i]->size());
    for (std::size_t t = 0; t < a.trajectories[i]->size(); ++t) {
      const Transition& x = a.trajectories[i]->transitions[t];
      EXPECT_EQ(x.log_prob_behavior, b.trajectories[i]->transitions[t].log_prob_behavior);
      EXPECT_LE(x.log_prob_behavior, 0.0);
      EXPECT_EQ(x.log_prob_behavior, policy_forward(policies[i], x.obs).log_probs[x.action]);
    }
  }
}

}  // namespace
}  // namespace xmix
