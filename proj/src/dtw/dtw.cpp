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

#include "xmix/dtw/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "xmix/error.hpp"

namespace xmix {

double dtw_distance(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) {
    throw PreconditionError("dtw_distance: empty sequence");
  }
  const std::size_t cols = b.size();
  std::vector<double> prev(cols), curr(cols);
  auto cost = [&](std::size_t i, std::size_t j) {
    return std::hypot(a[i].x - b[j].x, a[i].y - b[j].y);
  };
  prev[0] = cost(0, 0);
  for (std::size_t j = 1; j < cols; ++j) prev[j] = prev[j - 1] + cost(0, j);
  for (std::size_t i = 1; i < a.size(); ++i) {
    curr[0] = prev[0] + cost(i, 0);
    for (std::size_t j = 1; j < cols; ++j) {
      curr[j] = cost(i, j) + std::min({prev[j], curr[j - 1], prev[j - 1]});
    }
    std::swap(prev, curr);
  }
  return prev[cols - 1];
}

}  // namespace xmix
