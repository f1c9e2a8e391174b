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

#ifndef XMIX_DTW_DTW_HPP_
#define XMIX_DTW_DTW_HPP_

#include <span>

#include "xmix/env/road_graph.hpp"

namespace xmix {

// Dynamic time warping with Euclidean local cost, full window, summed along
// the cheapest monotone alignment (steps (1,0), (0,1), (1,1)). Not
// normalized by path length. Throws PreconditionError on an empty input.
double dtw_distance(std::span<const Point> a, std::span<const Point> b);

}  // namespace xmix

#endif  // XMIX_DTW_DTW_HPP_
