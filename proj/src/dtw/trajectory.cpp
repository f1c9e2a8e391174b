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

#include "xmix/dtw/trajectory.hpp"

#include <string>

#include "xmix/error.hpp"

namespace xmix {

const char* source_tag(Source s) { return s == Source::kAgent ? "a" : "e"; }

double Trajectory::total_reward() const {
  double sum = 0.0;
  for (const Transition& t : transitions) sum += t.reward;
  return sum;
}

std::vector<Point> traj_to_feature_seq(const Trajectory& traj,
                                       const RoadGraph& graph) {
  std::vector<Point> seq;
  seq.reserve(traj.junction_path.size());
  for (JunctionId j : traj.junction_path) {
    if (!graph.contains(j)) {
      throw PreconditionError("trajectory references unknown junction " +
                              std::to_string(j));
    }
    seq.push_back(graph.position(j));
  }
  return seq;
}

}  // namespace xmix
