// Copyright 2026 The lrmac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "lrmac/errors.hpp"
#include "lrmac/waterfill.hpp"

namespace lrmac {
namespace {

double bits(const std::vector<double>& g, const std::vector<double>& p) {
  double b = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) b += std::log2(1.0 + p[i] * g[i]);
  return b;
}

TEST(WaterFill, HandComputedBudget) {
  // Gains 1, 1/2, 1/4 (floors 1, 2, 4) and budget 3: 2L - 3 = 3 gives
  // L = 3, below the third floor, so the weakest stays dry.
  const std::vector<double> g{1.0, 0.5, 0.25};
  const auto wf = water_fill_budget(g, 3.0);
  EXPECT_NEAR(wf.level, 3.0, 1e-12);
  EXPECT_NEAR(wf.powers[0], 2.0, 1e-12);
  EXPECT_NEAR(wf.powers[1], 1.0, 1e-12);
  EXPECT_EQ(wf.powers[2], 0.0);
}

TEST(WaterFill, FlatChannelIsUniform) {
  const std::vector<double> g(8, 2.0);
  const auto wf = water_fill_budget(g, 4.0);
  for (double p : wf.powers) EXPECT_NEAR(p, 0.5, 1e-12);
}

TEST(WaterFill, TargetInvertsBudget) {
  const std::vector<double> g{3.0, 0.2, 1.1, 0.05};
  for (double budget : {0.1, 1.0, 10.0, 100.0}) {
    const auto a = water_fill_budget(g, budget);
    const auto b = water_fill_target(g, bits(g, a.powers));
    EXPECT_NEAR(std::accumulate(b.powers.begin(), b.powers.end(), 0.0), budget, 1e-9 * budget);
  }
}

TEST(WaterFill, ZeroCases) {
  const std::vector<double> g{0.0, 0.0};
  EXPECT_EQ(water_fill_budget(g, 1.0).powers, (std::vector<double>{0.0, 0.0}));
  EXPECT_THROW(water_fill_target(g, 1.0), Infeasible);
  EXPECT_THROW(water_fill_budget(g, -1.0), DomainError);
  const std::vector<double> h{1.0};
  EXPECT_EQ(water_fill_target(h, 0.0).powers[0], 0.0);
}

}  // namespace
}  // namespace lrmac
