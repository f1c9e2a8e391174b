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

#ifndef XMIX_DTW_TRAJECTORY_HPP_
#define XMIX_DTW_TRAJECTORY_HPP_

#include <span>
#include <vector>

#include "xmix/env/road_env.hpp"
#include "xmix/env/road_graph.hpp"

namespace xmix {

enum class Source { kAgent, kExpert };

const char* source_tag(Source s);  // "a" / "e"

struct Transition {
  Observation obs;
  int action = 0;
  double reward = 0.0;
  // Log-probability of `action` under the policy that produced it. For
  // expert transitions: the learner's policy at collection time.
  double log_prob_behavior = 0.0;
};

struct Trajectory {
  Source source = Source::kAgent;
  int agent_id = 0;
  std::vector<Transition> transitions;
  Observation terminal_obs;
  // Junctions visited, starting at the spawn junction. Always one longer
  // than `transitions`.
  std::vector<JunctionId> junction_path;
  // Ended by reaching the destination (absorbing, zero future reward).
  bool arrived = false;

  std::size_t size() const { return transitions.size(); }
  bool empty() const { return transitions.empty(); }
  double total_reward() const;
};

// Junction path mapped to node coordinates. Throws PreconditionError on a
// junction the graph does not contain.
std::vector<Point> traj_to_feature_seq(const Trajectory& traj,
                                       const RoadGraph& graph);

}  // namespace xmix

#endif  // XMIX_DTW_TRAJECTORY_HPP_
