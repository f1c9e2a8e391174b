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

#include <cmath>
#include <limits>
#include <vector>

#include "xmix/dtw/dtw.hpp"
#include "xmix/dtw/trajectory.hpp"
#include "xmix/env/fixtures.hpp"
#include "xmix/error.hpp"
#include "xmix/rng.hpp"

namespace xmix {
namespace {

double dist(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Minimum cost over every monotone warping path, by explicit enumeration.
double brute_dtw(const std::vector<Point>& a, const std::vector<Point>& b,
                 std::size_t i = 0, std::size_t j = 0) {
  const double here = dist(a[i], b[j]);
  if (i + 1 == a.size() && j + 1 == b.size()) return here;
  double best = std::numeric_limits<double>::infinity();
  if (i + 1 < a.size()) best = std::min(best, brute_dtw(a, b, i + 1, j));
  if (j + 1 < b.size()) best = std::min(best, brute_dtw(a, b, i, j + 1));
  if (i + 1 < a.size() && j + 1 < b.size()) {
    best = std::min(best, brute_dtw(a, b, i + 1, j + 1));
  }
  return here + best;
}

std::vector<Point> random_seq(Rng& rng, std::size_t max_len) {
  std::vector<Point> s(1 + rng.below(max_len));
  for (Point& p : s) {
    p.x = static_cast<double>(rng.below(9));
    p.y = static_cast<double>(rng.below(9));
  }
  return s;
}

TEST(Dtw, HandCases) {
  const std::vector<Point> a{{0, 0}};
  const std::vector<Point> b{{3, 4}};
  EXPECT_DOUBLE_EQ(dtw_distance(a, b), 5.0);
  const std::vector<Point> c{{0, 0}, {1, 0}};
  const std::vector<Point> d{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_DOUBLE_EQ(dtw_distance(c, d), 1.0);
  EXPECT_DOUBLE_EQ(dtw_distance(d, d), 0.0);
}

TEST(Dtw, MatchesBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_seq(rng, 8);
    const auto b = random_seq(rng, 8);
    const double fast = dtw_distance(a, b);
    EXPECT_NEAR(fast, brute_dtw(a, b), 1e-9);
    EXPECT_NEAR(fast, dtw_distance(b, a), 1e-12);
    EXPECT_GE(fast, 0.0);
    EXPECT_EQ(dtw_distance(a, a), 0.0);
  }
}

TEST(Dtw, EmptyInputThrows) {
  const std::vector<Point> a{{0, 0}};
  EXPECT_THROW(dtw_distance({}, a), PreconditionError);
  EXPECT_THROW(dtw_distance(a, {}), PreconditionError);
}

TEST(TrajToFeatureSeq, MapsJunctionsToCoordinates) {
  const RoadGraph g({{0, 0}, {3, 4}}, {{0, 1, 5.0}});
  Trajectory t;
  t.junction_path = {0, 1};
  t.transitions.resize(1);
  const auto seq = traj_to_feature_seq(t, g);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq[1].x, 3.0);
  EXPECT_EQ(seq[1].y, 4.0);

  Trajectory single;
  single.junction_path = {1};
  EXPECT_EQ(traj_to_feature_seq(single, g).size(), 1u);

  const RoadGraph grid = make_grid(5);
  Trajectory walk;
  walk.junction_path = {0, 1, 2, 3, 4, 9, 14, 19, 24};
  walk.transitions.resize(8);
  EXPECT_EQ(traj_to_feature_seq(walk, grid).size(), 9u);

  Trajectory bad;
  bad.junction_path = {0, 7};
  EXPECT_THROW(traj_to_feature_seq(bad, g), PreconditionError);
}

}  // namespace
}  // namespace xmix
